#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tmpn/petri.hpp"
#include "tmpn/psystem.hpp"

namespace tmpn {

// ---- timed membrane system -> untimed membrane system -------------------
//
// Each rule with delay e > 0 produces stage-(e-1) copies of its products;
// per-membrane ticking rules walk a staged symbol down one stage per step
// and finally release the base symbol, so products surface exactly when the
// timed system would deliver them.

struct staged_symbol {
  symbol base;  // in the detimed alphabet (original symbols keep their ids)
  int stage = 0;
  bool operator==(const staged_symbol&) const = default;
};

struct psystem_detiming {
  timed_psystem system;  // all delays 0
  // per detimed symbol id: the symbol it projects to, or nullopt for the
  // staged helpers the projection erases
  std::vector<std::optional<symbol>> projection;
  std::map<std::uint32_t, staged_symbol> staged;  // staged symbol id -> meaning

  // contents with staged symbols erased, for comparison against the source
  multiset project(const multiset& m) const;
};

psystem_detiming detime_psystem(const timed_psystem& sys);

// ---- timed net -> untimed net --------------------------------------------
//
// A transition with delay D keeps its input arcs but hands every product to
// a chain of D buffer places; one shared relay transition per stage moves
// all of the transition's products down one stage per step.

struct chain_place_info {
  std::size_t place = 0;       // destination place in the source net
  std::size_t transition = 0;  // owning transition in the source net
  int stage = 0;
  bool operator==(const chain_place_info&) const = default;
};

struct chain_transition_info {
  std::size_t transition = 0;  // owning transition in the source net
  int stage = 0;
  bool operator==(const chain_transition_info&) const = default;
};

struct petri_detiming {
  timed_petri_net net;  // all delays 0
  std::vector<std::optional<std::size_t>> place_projection;  // new -> old
  std::vector<std::optional<std::size_t>> transition_projection;
  std::map<std::size_t, chain_place_info> chain_places;
  std::map<std::size_t, chain_transition_info> chain_transitions;
};

petri_detiming detime_petri(const timed_petri_net& net);

// ---- timed membrane system -> timed net -----------------------------------
//
// One place per (symbol, membrane) pair, one transition per rule; weights
// mirror the rule's left-hand side and its target-resolved products, the
// locality is the home membrane and the delay is the execution time.

struct psystem_translation {
  timed_petri_net net;
  // place id -> (symbol, membrane); places are laid out symbol-major
  std::vector<std::pair<symbol, int>> place_meaning;
  std::vector<std::size_t> transition_of_rule;  // rule id -> transition id
  int membranes = 0;

  std::size_t place_of(symbol a, int membrane) const {
    return static_cast<std::size_t>(a.id) * membranes + (membrane - 1);
  }
  firing_choice to_net_choice(const step_choice& choice) const;
};

psystem_translation psystem_to_petri(const timed_psystem& sys);

}  // namespace tmpn
