#include "tmpn/psystem.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace tmpn {

membrane_structure membrane_structure::from_parents(
    const std::vector<std::pair<int, int>>& label_parent) {
  membrane_structure mu;
  mu.n = static_cast<int>(label_parent.size());
  if (mu.n == 0) throw validation_error("a membrane system needs at least one membrane");

  std::vector<bool> seen(mu.n + 1, false);
  for (const auto& [label, parent] : label_parent) {
    if (label < 1 || label > mu.n)
      throw validation_error("membrane labels must form 1.." + std::to_string(mu.n) +
                             ", got " + std::to_string(label));
    if (seen[label]) throw validation_error("duplicate membrane label " + std::to_string(label));
    seen[label] = true;
  }

  mu.parent.assign(mu.n + 1, environment_label);
  mu.children.assign(mu.n + 1, {});
  for (const auto& [label, parent] : label_parent) {
    if (parent == environment_label) {
      if (mu.skin != 0) throw validation_error("more than one skin membrane");
      mu.skin = label;
    } else {
      if (parent < 1 || parent > mu.n)
        throw validation_error("membrane " + std::to_string(label) +
                               " has an unknown parent " + std::to_string(parent));
      mu.parent[label] = parent;
      mu.children[parent].push_back(label);
    }
  }
  if (mu.skin == 0) throw validation_error("no skin membrane (exactly one must have no parent)");
  for (auto& ch : mu.children) std::sort(ch.begin(), ch.end());

  // reachability from the skin rules out parent cycles
  std::vector<bool> reached(mu.n + 1, false);
  std::vector<int> stack{mu.skin};
  while (!stack.empty()) {
    int m = stack.back();
    stack.pop_back();
    if (reached[m]) continue;
    reached[m] = true;
    for (int c : mu.children[m]) stack.push_back(c);
  }
  for (int i = 1; i <= mu.n; ++i)
    if (!reached[i])
      throw validation_error("membrane " + std::to_string(i) + " is not below the skin");
  return mu;
}

bool membrane_structure::is_child(int child, int of) const {
  return valid_label(child) && parent[child] == of;
}

void timed_psystem::finalize() {
  if (structure.n == 0) throw validation_error("missing membrane structure");
  if (initial.size() != static_cast<std::size_t>(structure.n))
    throw validation_error("initial contents must cover every membrane");

  std::stable_sort(rules.begin(), rules.end(),
                   [](const rule& a, const rule& b) { return a.home < b.home; });

  std::vector<std::string> names;
  for (const rule& r : rules) {
    if (!structure.valid_label(r.home))
      throw validation_error("rule " + r.name + " lives in unknown membrane " +
                             std::to_string(r.home));
    if (r.lhs.empty())
      throw validation_error("rule " + r.name + " has an empty left-hand side");
    if (r.delay < 0) throw validation_error("rule " + r.name + " has a negative delay");
    for (const auto& [child, ms] : r.rhs_in) {
      if (!structure.is_child(child, r.home))
        throw validation_error("rule " + r.name + " sends objects into " +
                               std::to_string(child) + ", which is not a child of membrane " +
                               std::to_string(r.home));
      if (ms.empty())
        throw validation_error("rule " + r.name + " has an empty in-target product");
    }
    names.push_back(r.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw validation_error("rule names must be unique within a system");

  auto check_symbols = [&](const multiset& ms, const std::string& where) {
    for (const auto& [s, n] : ms) {
      (void)n;
      if (s.id >= alphabet.size())
        throw validation_error(where + " uses a symbol outside the alphabet");
    }
  };
  for (int i = 1; i <= structure.n; ++i)
    check_symbols(initial[i - 1], "membrane " + std::to_string(i));
  for (const rule& r : rules) {
    check_symbols(r.lhs, "rule " + r.name);
    check_symbols(r.rhs_here, "rule " + r.name);
    check_symbols(r.rhs_out, "rule " + r.name);
    for (const auto& [child, ms] : r.rhs_in) {
      (void)child;
      check_symbols(ms, "rule " + r.name);
    }
  }

  rules_by_membrane_.assign(structure.n + 1, {});
  for (std::size_t i = 0; i < rules.size(); ++i)
    rules_by_membrane_[rules[i].home].push_back(i);
}

int timed_psystem::max_delay() const {
  int m = 0;
  for (const rule& r : rules) m = std::max(m, r.delay);
  return m;
}

const std::vector<std::size_t>& timed_psystem::rules_of(int membrane) const {
  return rules_by_membrane_.at(membrane);
}

configuration initial_configuration(const timed_psystem& sys) {
  configuration c;
  c.contents = sys.initial;
  c.pending.assign(sys.structure.n, {});
  c.clock = 0;
  return c;
}

int resolve_target(const membrane_structure& mu, int home, const target& t) {
  switch (t.k) {
    case target::kind::here:
      return home;
    case target::kind::out:
      return mu.parent[home];  // environment_label when home is the skin
    case target::kind::in:
      if (!mu.is_child(t.child, home))
        throw no_such_child("membrane " + std::to_string(home) + " has no child " +
                            std::to_string(t.child));
      return t.child;
  }
  throw error("unreachable target kind");
}

multiset lhs_of(const timed_psystem& sys, const step_choice& choice, int membrane) {
  multiset total;
  for (const auto& [rid, n] : choice.counts) {
    if (rid >= sys.rules.size()) throw validation_error("choice names an unknown rule id");
    const rule& r = sys.rules[rid];
    if (r.home == membrane) total.add(scale(n, r.lhs));
  }
  return total;
}

bool is_applicable(const timed_psystem& sys, const configuration& c, const step_choice& choice) {
  for (const auto& [rid, n] : choice.counts) {
    if (rid >= sys.rules.size() || n == 0) return false;
  }
  for (int i = 1; i <= sys.structure.n; ++i)
    if (!leq(lhs_of(sys, choice, i), c.contents[i - 1])) return false;
  return true;
}

bool is_maximal(const timed_psystem& sys, const configuration& c, const step_choice& choice) {
  if (!is_applicable(sys, c, choice)) return false;
  std::vector<multiset> residual;
  residual.reserve(sys.structure.n);
  for (int i = 1; i <= sys.structure.n; ++i)
    residual.push_back(sub(c.contents[i - 1], lhs_of(sys, choice, i)));
  for (const rule& r : sys.rules)
    if (leq(r.lhs, residual[r.home - 1])) return false;
  return true;
}

namespace {

// largest k with k * lhs <= avail
count_t capacity(const multiset& lhs, const multiset& avail) {
  count_t cap = std::numeric_limits<count_t>::max();
  for (const auto& [s, n] : lhs) cap = std::min(cap, avail.count(s) / n);
  return cap;
}

struct max_enum {
  const timed_psystem& sys;
  std::vector<multiset> residual;
  std::vector<count_t> counts;
  std::vector<step_choice> out;
  // overlap[k]: some rule other than k shares an lhs symbol and membrane
  // with rule k, so choosing fewer than the cap can still be maximal
  std::vector<bool> overlap;

  explicit max_enum(const timed_psystem& s, const configuration& c) : sys(s) {
    for (int i = 1; i <= s.structure.n; ++i) residual.push_back(c.contents[i - 1]);
    counts.assign(s.rules.size(), 0);
    overlap.assign(s.rules.size(), false);
    for (std::size_t a = 0; a < s.rules.size(); ++a)
      for (std::size_t b = 0; b < s.rules.size(); ++b) {
        if (a == b || s.rules[a].home != s.rules[b].home) continue;
        for (const auto& [sym, n] : s.rules[a].lhs) {
          (void)n;
          if (s.rules[b].lhs.contains(sym)) {
            overlap[a] = true;
            break;
          }
        }
      }
  }

  bool leaf_maximal() const {
    for (const rule& r : sys.rules)
      if (leq(r.lhs, residual[r.home - 1])) return false;
    return true;
  }

  void dfs(std::size_t k) {
    if (k == sys.rules.size()) {
      if (!leaf_maximal()) return;
      step_choice ch;
      for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) ch.counts.emplace(i, counts[i]);
      out.push_back(std::move(ch));
      return;
    }
    const rule& r = sys.rules[k];
    multiset& avail = residual[r.home - 1];
    count_t cap = capacity(r.lhs, avail);
    avail.remove(scale(cap, r.lhs));
    count_t c = cap;
    while (true) {
      counts[k] = c;
      dfs(k + 1);
      // nothing else consumes these symbols: below the cap this branch can
      // never become maximal
      if (c == 0 || !overlap[k]) break;
      avail.add(r.lhs);
      --c;
    }
    counts[k] = 0;
    avail.add(scale(c, r.lhs));
  }
};

}  // namespace

std::vector<step_choice> enumerate_maximal(const timed_psystem& sys, const configuration& c) {
  if (c.contents.size() != static_cast<std::size_t>(sys.structure.n))
    throw validation_error("configuration does not match the system's membrane count");
  max_enum e(sys, c);
  e.dfs(0);
  std::sort(e.out.begin(), e.out.end());
  return e.out;
}

namespace {

void deliver_and_shift(multiset& contents, delay_queue& pending) {
  auto due = pending.find(0);
  if (due != pending.end()) {
    contents.add(due->second);
    pending.erase(due);
  }
  delay_queue shifted;
  for (auto& [d, ms] : pending) shifted.emplace(d - 1, std::move(ms));
  pending = std::move(shifted);
}

}  // namespace

configuration apply_step(const timed_psystem& sys, const configuration& c,
                         const step_choice& choice) {
  if (!is_applicable(sys, c, choice))
    throw not_applicable("step choice does not fit the current contents");
  if (!is_maximal(sys, c, choice))
    throw not_maximal("step choice is not maximal: another rule occurrence fits");

  configuration next = c;
  for (int i = 1; i <= sys.structure.n; ++i)
    next.contents[i - 1].remove(lhs_of(sys, choice, i));

  auto deposit = [&](int membrane, int delay, const multiset& ms) {
    if (ms.empty()) return;
    delay_queue& q =
        membrane == environment_label ? next.environment_pending : next.pending[membrane - 1];
    q[delay].add(ms);
  };
  for (const auto& [rid, n] : choice.counts) {
    const rule& r = sys.rules[rid];
    deposit(resolve_target(sys.structure, r.home, target::here()), r.delay, scale(n, r.rhs_here));
    deposit(resolve_target(sys.structure, r.home, target::out()), r.delay, scale(n, r.rhs_out));
    for (const auto& [child, ms] : r.rhs_in)
      deposit(resolve_target(sys.structure, r.home, target::in(child)), r.delay, scale(n, ms));
  }

  for (int i = 1; i <= sys.structure.n; ++i)
    deliver_and_shift(next.contents[i - 1], next.pending[i - 1]);
  deliver_and_shift(next.environment, next.environment_pending);
  next.clock = c.clock + 1;
  return next;
}

namespace {

std::vector<std::pair<step_choice, configuration>> successors(const timed_psystem& sys,
                                                              const configuration& c) {
  std::vector<std::pair<step_choice, configuration>> out;
  for (step_choice& ch : enumerate_maximal(sys, c)) {
    configuration next = apply_step(sys, c, ch);
    out.emplace_back(std::move(ch), std::move(next));
  }
  return out;
}

}  // namespace

p_trace run_trace(const timed_psystem& sys, int steps, const run_policy& policy) {
  if (policy.kind == policy_kind::exhaustive)
    throw validation_error("exhaustive policy yields a graph, not a single trace");
  p_trace t;
  t.states.push_back(initial_configuration(sys));
  std::mt19937_64 rng(policy.seed);
  for (int i = 0; i < steps; ++i) {
    std::vector<step_choice> choices = enumerate_maximal(sys, t.states.back());
    std::size_t pick = 0;
    if (policy.kind == policy_kind::seeded && choices.size() > 1)
      pick = static_cast<std::size_t>(rng() % choices.size());
    t.choices.push_back(choices[pick]);
    t.states.push_back(apply_step(sys, t.states.back(), choices[pick]));
  }
  return t;
}

p_graph run_graph(const timed_psystem& sys, int steps, std::size_t budget) {
  return explore<configuration, step_choice>(
      initial_configuration(sys), steps, budget,
      [&](const configuration& c) { return successors(sys, c); },
      [](const configuration& c) { return state_key(c); });
}

namespace {

void key_multiset(std::ostringstream& out, const multiset& m) {
  for (const auto& [s, n] : m) out << s.id << ':' << n << ',';
}

void key_queue(std::ostringstream& out, const delay_queue& q) {
  for (const auto& [d, ms] : q) {
    out << d << "=(";
    key_multiset(out, ms);
    out << ')';
  }
}

}  // namespace

std::string state_key(const configuration& c) {
  std::ostringstream out;
  out << c.clock << '#';
  for (const multiset& m : c.contents) {
    key_multiset(out, m);
    out << '|';
  }
  out << '#';
  for (const delay_queue& q : c.pending) {
    key_queue(out, q);
    out << '|';
  }
  out << "#env:";
  key_multiset(out, c.environment);
  out << '#';
  key_queue(out, c.environment_pending);
  return out.str();
}

std::string to_string(const timed_psystem& sys, const step_choice& choice) {
  if (choice.empty()) return "{}";
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [rid, n] : choice.counts) {
    if (!first) out << " + ";
    first = false;
    if (n != 1) out << n << ' ';
    out << sys.rules[rid].name;
  }
  out << '}';
  return out.str();
}

std::string to_string(const timed_psystem& sys, const configuration& c) {
  std::ostringstream out;
  out << '(';
  for (int i = 1; i <= sys.structure.n; ++i)
    out << to_string(c.contents[i - 1], sys.alphabet) << ", ";
  out << c.clock << ')';
  if (!c.environment.empty()) out << " env{" << to_string(c.environment, sys.alphabet) << '}';
  return out.str();
}

}  // namespace tmpn
