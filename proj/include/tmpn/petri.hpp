#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmpn/explore.hpp"
#include "tmpn/multiset.hpp"
#include "tmpn/policy.hpp"

namespace tmpn {

struct place_decl {
  std::string name;
  bool operator==(const place_decl&) const = default;
};

struct transition_decl {
  std::string name;
  int locality = 0;  // annotation only: it never restricts firing
  int delay = 0;
  bool operator==(const transition_decl&) const = default;
};

// weighted arc endpoint, stored sparse per transition and sorted by place
struct arc {
  std::size_t place = 0;
  count_t weight = 0;  // >= 1 once finalized
  friend auto operator<=>(const arc&, const arc&) = default;
};

class timed_petri_net {
 public:
  std::vector<place_decl> places;
  std::vector<transition_decl> transitions;
  std::vector<std::vector<arc>> pre;   // per transition: input arcs (place -> tr)
  std::vector<std::vector<arc>> post;  // per transition: output arcs (tr -> place)
  std::vector<count_t> initial_marking;

  // sorts arc lists, then checks: disjoint unique names, arcs in range with
  // positive weights, no duplicate arcs, every transition consumes something
  void finalize();

  std::size_t place_count() const { return places.size(); }
  std::size_t transition_count() const { return transitions.size(); }
  std::optional<std::size_t> place_id(std::string_view name) const;
  std::optional<std::size_t> transition_id(std::string_view name) const;

  count_t input_weight(std::size_t place, std::size_t tr) const;
  count_t output_weight(std::size_t tr, std::size_t place) const;
  int max_delay() const;

  bool operator==(const timed_petri_net& other) const {
    return places == other.places && transitions == other.transitions && pre == other.pre &&
           post == other.post && initial_marking == other.initial_marking;
  }
};

// remaining-delay -> token count per place
using token_queue = std::map<int, count_t>;

struct net_state {
  std::vector<count_t> marking;  // per place
  std::vector<token_queue> pending;
  long long gc = 0;  // global clock

  bool operator==(const net_state&) const = default;
};

// multiset of transition occurrences; counts are > 0
struct firing_choice {
  std::map<std::size_t, count_t> counts;

  bool empty() const { return counts.empty(); }
  count_t of(std::size_t tr) const {
    auto it = counts.find(tr);
    return it == counts.end() ? 0 : it->second;
  }
  friend auto operator<=>(const firing_choice&, const firing_choice&) = default;
};

net_state initial_state(const timed_petri_net& net);

// tokens the choice consumes from one place
count_t pre_of(const timed_petri_net& net, const firing_choice& choice, std::size_t place);

bool is_enabled(const timed_petri_net& net, const net_state& s, const firing_choice& choice);
bool is_max_enabled(const timed_petri_net& net, const net_state& s, const firing_choice& choice);

// all maximal enabled choices, sorted; exactly the empty choice at a dead
// marking
std::vector<firing_choice> enumerate_max_enabled(const timed_petri_net& net, const net_state& s);

// one synchronous step: consume all inputs, queue outputs at the firing
// transition's delay, deliver everything due now, advance gc
net_state fire(const timed_petri_net& net, const net_state& s, const firing_choice& choice);

struct pn_trace {
  std::vector<net_state> states;
  std::vector<firing_choice> choices;
};

pn_trace run_trace(const timed_petri_net& net, int steps, const run_policy& policy);

using pn_graph = trace_graph<net_state, firing_choice>;
pn_graph run_graph(const timed_petri_net& net, int steps, std::size_t budget = 50000);

std::string state_key(const net_state& s);

std::string to_string(const timed_petri_net& net, const firing_choice& choice);
std::string to_string(const timed_petri_net& net, const net_state& s);

}  // namespace tmpn
