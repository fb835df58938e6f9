#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmpn/petri.hpp"
#include "tmpn/psystem.hpp"
#include "tmpn/translate.hpp"

namespace tmpn {

// Outcome of one bounded equivalence check. A failed check always carries a
// witness that replays: re-running the recorded choices through the step
// functions reproduces the mismatch.
struct verdict {
  bool ok = true;
  std::string property;  // "psystem-detiming" | "petri-detiming" | "step-correspondence"
  int depth_checked = 0;
  std::optional<int> fail_depth;
  std::string detail;
  nlohmann::json witness;  // null when ok
};

inline constexpr std::size_t default_state_budget = 50000;

// Reference enumerations that walk the full count-vector grid and filter.
// Deliberately naive; they exist to cross-check enumerate_maximal /
// enumerate_max_enabled. Throw capacity_exceeded when the grid would exceed
// max_vectors.
std::vector<step_choice> oracle_maximal_psystem(const timed_psystem& sys, const configuration& c,
                                                std::uint64_t max_vectors = 1u << 20);
std::vector<firing_choice> oracle_maximal_petri(const timed_petri_net& net, const net_state& s,
                                                std::uint64_t max_vectors = 1u << 20);

// Detiming a membrane system preserves, depth for depth, the set of
// reachable membrane contents (staged helpers erased, pending invisible).
verdict check_psystem_detiming(const timed_psystem& sys, int depth,
                               std::size_t budget = default_state_budget);
verdict check_psystem_detiming_pair(const timed_psystem& timed, const timed_psystem& untimed,
                                    const std::vector<std::optional<symbol>>& projection,
                                    int depth, std::size_t budget = default_state_budget);

// Detiming a net preserves, depth for depth, the set of reachable markings
// restricted to the original places.
verdict check_petri_detiming(const timed_petri_net& net, int depth,
                             std::size_t budget = default_state_budget);
verdict check_petri_detiming_pair(const timed_petri_net& timed, const timed_petri_net& untimed,
                                  const std::vector<std::optional<std::size_t>>& place_projection,
                                  int depth, std::size_t budget = default_state_budget);

// A membrane system and its translated net stay in lockstep: at every
// reached pair the maximal choice sets are in bijection, and matching
// choices lead to corresponding states (contents = marking, pending =
// pending, clock = gc).
verdict check_step_correspondence(const timed_psystem& sys, int depth,
                                  std::size_t budget = default_state_budget);
verdict check_step_correspondence_pair(const timed_psystem& sys,
                                       const psystem_translation& translation, int depth,
                                       std::size_t budget = default_state_budget);

// Re-execute a failed verdict's witness; true iff the recorded mismatch
// shows up again. Throws validation_error on an ok verdict.
bool replay_psystem_detiming(const verdict& v, const timed_psystem& timed,
                             const timed_psystem& untimed,
                             const std::vector<std::optional<symbol>>& projection);
bool replay_petri_detiming(const verdict& v, const timed_petri_net& timed,
                           const timed_petri_net& untimed,
                           const std::vector<std::optional<std::size_t>>& place_projection);
bool replay_step_correspondence(const verdict& v, const timed_psystem& sys,
                                const psystem_translation& translation);

// conveniences that rebuild the translated side first
bool replay(const verdict& v, const timed_psystem& source);
bool replay(const verdict& v, const timed_petri_net& source);

}  // namespace tmpn
