#pragma once

#include <cstdint>

#include "tmpn/petri.hpp"
#include "tmpn/psystem.hpp"

namespace tmpn {

// Self-contained splitmix64 stream so generated models are reproducible
// independent of the standard library's distribution implementations.
struct rng64 {
  std::uint64_t state = 0;

  explicit rng64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform-ish in [0, n); n must be > 0
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

struct psystem_params {
  int max_membranes = 2;
  int max_symbols = 3;
  int max_rules = 4;
  int max_lhs = 2;    // objects on a left-hand side
  int max_rhs = 2;    // objects across all products
  int max_delay = 3;
  int token_budget = 6;  // objects in the initial contents
};

struct petri_params {
  int max_places = 4;
  int max_transitions = 3;
  int max_inputs = 2;
  int max_outputs = 2;
  count_t max_weight = 2;
  int max_delay = 3;
  int max_locality = 2;
  int token_budget = 8;
};

// Both generators emit fully valid models: in-targets always name a real
// child, every transition consumes something, names are unique. Draws whose
// 5-step graph would dwarf the checks' state budgets are redrawn.
timed_psystem random_psystem(const psystem_params& params, std::uint64_t seed);
timed_petri_net random_petri(const petri_params& params, std::uint64_t seed);

// single unfiltered draws advancing the caller's stream
timed_psystem draw_psystem(const psystem_params& params, rng64& rng);
timed_petri_net draw_petri(const petri_params& params, rng64& rng);

}  // namespace tmpn
