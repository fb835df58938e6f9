#pragma once

#include <cstdint>

namespace tmpn {

// How a run resolves nondeterminism between maximal choices.
enum class policy_kind { exhaustive, first, seeded };

struct run_policy {
  policy_kind kind = policy_kind::first;
  std::uint64_t seed = 0;

  static run_policy first() { return {policy_kind::first, 0}; }
  static run_policy exhaustive() { return {policy_kind::exhaustive, 0}; }
  static run_policy seeded(std::uint64_t s) { return {policy_kind::seeded, s}; }
};

}  // namespace tmpn
