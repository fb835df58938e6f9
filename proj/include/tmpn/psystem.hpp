#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tmpn/explore.hpp"
#include "tmpn/multiset.hpp"
#include "tmpn/policy.hpp"

namespace tmpn {

// Destination of objects sent out of the skin membrane. Not a membrane:
// nothing is ever matched there, it only accumulates.
inline constexpr int environment_label = 0;

// Rooted tree of membranes labelled 1..n; the root is the skin.
struct membrane_structure {
  int n = 0;
  // parent[label]; parent[skin] == environment_label. Index 0 unused.
  std::vector<int> parent;
  std::vector<std::vector<int>> children;  // by label, sorted
  int skin = 0;

  // builds and validates: labels 1..n, exactly one root, acyclic
  static membrane_structure from_parents(const std::vector<std::pair<int, int>>& label_parent);

  bool valid_label(int i) const { return i >= 1 && i <= n; }
  bool is_child(int child, int of) const;
  bool operator==(const membrane_structure&) const = default;
};

struct target {
  enum class kind : std::uint8_t { here, out, in };
  kind k = kind::here;
  int child = 0;  // only for kind::in

  static target here() { return {kind::here, 0}; }
  static target out() { return {kind::out, 0}; }
  static target in(int child) { return {kind::in, child}; }
  friend auto operator<=>(const target&, const target&) = default;
};

// u -> v with per-target products and an execution time (delay) in steps.
struct rule {
  std::string name;
  int home = 0;
  multiset lhs;  // never empty in a valid system
  multiset rhs_here;
  multiset rhs_out;
  std::map<int, multiset> rhs_in;  // child label -> product
  int delay = 0;

  bool operator==(const rule&) const = default;
};

class timed_psystem {
 public:
  symbol_table alphabet;
  membrane_structure structure;
  std::vector<multiset> initial;  // index label-1
  std::vector<rule> rules;        // rule id == index; sorted by home

  // normalizes rule order (stable, by home membrane) and checks every
  // structural invariant; throws validation_error
  void finalize();

  int max_delay() const;
  const std::vector<std::size_t>& rules_of(int membrane) const;
  const multiset& initial_contents(int membrane) const { return initial.at(membrane - 1); }

  bool operator==(const timed_psystem& other) const {
    return alphabet == other.alphabet && structure == other.structure &&
           initial == other.initial && rules == other.rules;
  }

 private:
  std::vector<std::vector<std::size_t>> rules_by_membrane_;
};

// remaining-delay -> product; key 0 is delivered at the end of the
// current step, so keys stay within [0, max delay] between steps
using delay_queue = std::map<int, multiset>;

struct configuration {
  std::vector<multiset> contents;  // index label-1
  std::vector<delay_queue> pending;
  multiset environment;
  delay_queue environment_pending;
  long long clock = 0;

  bool operator==(const configuration&) const = default;
};

// multiset of rule occurrences; counts are > 0
struct step_choice {
  std::map<std::size_t, count_t> counts;

  bool empty() const { return counts.empty(); }
  count_t of(std::size_t rule_id) const {
    auto it = counts.find(rule_id);
    return it == counts.end() ? 0 : it->second;
  }
  friend auto operator<=>(const step_choice&, const step_choice&) = default;
};

configuration initial_configuration(const timed_psystem& sys);

// membrane the products of `t` fired in `home` land in; environment_label
// for out-of-skin. Throws no_such_child for an in-target that is not a child.
int resolve_target(const membrane_structure& mu, int home, const target& t);

// total left-hand side the choice consumes inside one membrane
multiset lhs_of(const timed_psystem& sys, const step_choice& choice, int membrane);

bool is_applicable(const timed_psystem& sys, const configuration& c, const step_choice& choice);
// applicable and no single rule occurrence can be added
bool is_maximal(const timed_psystem& sys, const configuration& c, const step_choice& choice);

// all maximal choices, sorted; contains exactly the empty choice when no
// rule is applicable
std::vector<step_choice> enumerate_maximal(const timed_psystem& sys, const configuration& c);

// one synchronous step: subtract all left-hand sides, queue products at
// their delays, deliver everything due now, advance the clock
configuration apply_step(const timed_psystem& sys, const configuration& c,
                         const step_choice& choice);

struct p_trace {
  std::vector<configuration> states;  // steps+1 entries
  std::vector<step_choice> choices;   // steps entries
};

// deterministic single trace: `first` picks the canonically least maximal
// choice, `seeded` draws uniformly from the enumerated set
p_trace run_trace(const timed_psystem& sys, int steps, const run_policy& policy);

using p_graph = trace_graph<configuration, step_choice>;
p_graph run_graph(const timed_psystem& sys, int steps, std::size_t budget = 50000);

// canonical serialization; injective on configurations of one system
std::string state_key(const configuration& c);

std::string to_string(const timed_psystem& sys, const step_choice& choice);
std::string to_string(const timed_psystem& sys, const configuration& c);

}  // namespace tmpn
