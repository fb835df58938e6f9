#include "tmpn/petri.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace tmpn {

namespace {

count_t checked_add(count_t a, count_t b) {
  count_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("token count overflow");
  return r;
}

count_t checked_mul(count_t a, count_t b) {
  count_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("token count overflow");
  return r;
}

}  // namespace

void timed_petri_net::finalize() {
  if (pre.size() != transitions.size() || post.size() != transitions.size())
    throw validation_error("every transition needs an input and an output arc list");
  if (initial_marking.size() != places.size())
    throw validation_error("initial marking must cover every place");

  std::unordered_set<std::string> names;
  for (const place_decl& p : places)
    if (!names.insert(p.name).second)
      throw validation_error("duplicate node name " + p.name);
  for (const transition_decl& t : transitions) {
    if (!names.insert(t.name).second)
      throw validation_error("duplicate node name " + t.name);
    if (t.delay < 0) throw validation_error("transition " + t.name + " has a negative delay");
    if (t.locality < 0)
      throw validation_error("transition " + t.name + " has a negative locality");
  }

  auto check_arcs = [&](std::vector<arc>& arcs, const std::string& tr) {
    std::sort(arcs.begin(), arcs.end());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (arcs[i].place >= places.size())
        throw validation_error("arc of " + tr + " references an unknown place");
      if (arcs[i].weight == 0)
        throw validation_error("arc of " + tr + " has weight 0; arcs exist iff weight >= 1");
      if (i > 0 && arcs[i].place == arcs[i - 1].place)
        throw validation_error("duplicate arc on " + tr);
    }
  };
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    check_arcs(pre[t], transitions[t].name);
    check_arcs(post[t], transitions[t].name);
    if (pre[t].empty())
      throw validation_error("transition " + transitions[t].name +
                             " consumes nothing: maximal steps would be unbounded");
  }
}

std::optional<std::size_t> timed_petri_net::place_id(std::string_view name) const {
  for (std::size_t i = 0; i < places.size(); ++i)
    if (places[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> timed_petri_net::transition_id(std::string_view name) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].name == name) return i;
  return std::nullopt;
}

namespace {

count_t arc_weight(const std::vector<arc>& arcs, std::size_t place) {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), place,
                             [](const arc& a, std::size_t p) { return a.place < p; });
  if (it != arcs.end() && it->place == place) return it->weight;
  return 0;
}

}  // namespace

count_t timed_petri_net::input_weight(std::size_t place, std::size_t tr) const {
  return arc_weight(pre.at(tr), place);
}

count_t timed_petri_net::output_weight(std::size_t tr, std::size_t place) const {
  return arc_weight(post.at(tr), place);
}

int timed_petri_net::max_delay() const {
  int m = 0;
  for (const transition_decl& t : transitions) m = std::max(m, t.delay);
  return m;
}

net_state initial_state(const timed_petri_net& net) {
  net_state s;
  s.marking = net.initial_marking;
  s.pending.assign(net.places.size(), {});
  s.gc = 0;
  return s;
}

count_t pre_of(const timed_petri_net& net, const firing_choice& choice, std::size_t place) {
  count_t total = 0;
  for (const auto& [tr, n] : choice.counts) {
    if (tr >= net.transitions.size()) throw validation_error("choice names an unknown transition");
    total = checked_add(total, checked_mul(n, net.input_weight(place, tr)));
  }
  return total;
}

bool is_enabled(const timed_petri_net& net, const net_state& s, const firing_choice& choice) {
  for (const auto& [tr, n] : choice.counts)
    if (tr >= net.transitions.size() || n == 0) return false;
  std::vector<count_t> need(net.places.size(), 0);
  for (const auto& [tr, n] : choice.counts)
    for (const arc& a : net.pre[tr]) need[a.place] = checked_add(need[a.place], checked_mul(n, a.weight));
  for (std::size_t p = 0; p < need.size(); ++p)
    if (need[p] > s.marking[p]) return false;
  return true;
}

bool is_max_enabled(const timed_petri_net& net, const net_state& s, const firing_choice& choice) {
  if (!is_enabled(net, s, choice)) return false;
  std::vector<count_t> residual = s.marking;
  for (const auto& [tr, n] : choice.counts)
    for (const arc& a : net.pre[tr]) residual[a.place] -= checked_mul(n, a.weight);
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    bool fits = true;
    for (const arc& a : net.pre[t])
      if (residual[a.place] < a.weight) {
        fits = false;
        break;
      }
    if (fits) return false;
  }
  return true;
}

namespace {

struct max_enum {
  const timed_petri_net& net;
  std::vector<count_t> residual;
  std::vector<count_t> counts;
  std::vector<firing_choice> out;
  std::vector<bool> overlap;  // shares an input place with another transition

  max_enum(const timed_petri_net& n, const net_state& s) : net(n), residual(s.marking) {
    counts.assign(n.transitions.size(), 0);
    overlap.assign(n.transitions.size(), false);
    for (std::size_t a = 0; a < n.transitions.size(); ++a)
      for (std::size_t b = 0; b < n.transitions.size() && !overlap[a]; ++b) {
        if (a == b) continue;
        for (const arc& in : n.pre[a])
          if (arc_weight(n.pre[b], in.place) > 0) {
            overlap[a] = true;
            break;
          }
      }
  }

  count_t cap_of(std::size_t t) const {
    count_t cap = std::numeric_limits<count_t>::max();
    for (const arc& a : net.pre[t]) cap = std::min(cap, residual[a.place] / a.weight);
    return cap;
  }

  bool leaf_maximal() const {
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
      bool fits = true;
      for (const arc& a : net.pre[t])
        if (residual[a.place] < a.weight) {
          fits = false;
          break;
        }
      if (fits) return false;
    }
    return true;
  }

  void take(std::size_t t, count_t k) {
    for (const arc& a : net.pre[t]) residual[a.place] -= checked_mul(k, a.weight);
  }
  void give(std::size_t t, count_t k) {
    for (const arc& a : net.pre[t]) residual[a.place] += checked_mul(k, a.weight);
  }

  void dfs(std::size_t t) {
    if (t == net.transitions.size()) {
      if (!leaf_maximal()) return;
      firing_choice ch;
      for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0) ch.counts.emplace(i, counts[i]);
      out.push_back(std::move(ch));
      return;
    }
    count_t cap = cap_of(t);
    take(t, cap);
    count_t c = cap;
    while (true) {
      counts[t] = c;
      dfs(t + 1);
      if (c == 0 || !overlap[t]) break;
      give(t, 1);
      --c;
    }
    counts[t] = 0;
    give(t, c);
  }
};

}  // namespace

std::vector<firing_choice> enumerate_max_enabled(const timed_petri_net& net, const net_state& s) {
  if (s.marking.size() != net.places.size())
    throw validation_error("state does not match the net's place count");
  max_enum e(net, s);
  e.dfs(0);
  std::sort(e.out.begin(), e.out.end());
  return e.out;
}

net_state fire(const timed_petri_net& net, const net_state& s, const firing_choice& choice) {
  if (!is_enabled(net, s, choice))
    throw not_enabled("firing choice is not enabled at this marking");
  if (!is_max_enabled(net, s, choice))
    throw not_maximal("firing choice is not maximal: another transition occurrence fits");

  net_state next = s;
  for (const auto& [tr, n] : choice.counts)
    for (const arc& a : net.pre[tr]) next.marking[a.place] -= checked_mul(n, a.weight);
  for (const auto& [tr, n] : choice.counts) {
    int d = net.transitions[tr].delay;
    for (const arc& a : net.post[tr]) {
      count_t& slot = next.pending[a.place][d];
      slot = checked_add(slot, checked_mul(n, a.weight));
    }
  }
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    token_queue& q = next.pending[p];
    auto due = q.find(0);
    if (due != q.end()) {
      next.marking[p] = checked_add(next.marking[p], due->second);
      q.erase(due);
    }
    token_queue shifted;
    for (const auto& [d, k] : q) shifted.emplace(d - 1, k);
    q = std::move(shifted);
  }
  next.gc = s.gc + 1;
  return next;
}

namespace {

std::vector<std::pair<firing_choice, net_state>> successors(const timed_petri_net& net,
                                                            const net_state& s) {
  std::vector<std::pair<firing_choice, net_state>> out;
  for (firing_choice& ch : enumerate_max_enabled(net, s)) {
    net_state next = fire(net, s, ch);
    out.emplace_back(std::move(ch), std::move(next));
  }
  return out;
}

}  // namespace

pn_trace run_trace(const timed_petri_net& net, int steps, const run_policy& policy) {
  if (policy.kind == policy_kind::exhaustive)
    throw validation_error("exhaustive policy yields a graph, not a single trace");
  pn_trace t;
  t.states.push_back(initial_state(net));
  std::mt19937_64 rng(policy.seed);
  for (int i = 0; i < steps; ++i) {
    std::vector<firing_choice> choices = enumerate_max_enabled(net, t.states.back());
    std::size_t pick = 0;
    if (policy.kind == policy_kind::seeded && choices.size() > 1)
      pick = static_cast<std::size_t>(rng() % choices.size());
    t.choices.push_back(choices[pick]);
    t.states.push_back(fire(net, t.states.back(), choices[pick]));
  }
  return t;
}

pn_graph run_graph(const timed_petri_net& net, int steps, std::size_t budget) {
  return explore<net_state, firing_choice>(
      initial_state(net), steps, budget,
      [&](const net_state& s) { return successors(net, s); },
      [](const net_state& s) { return state_key(s); });
}

std::string state_key(const net_state& s) {
  std::ostringstream out;
  out << s.gc << '#';
  for (count_t m : s.marking) out << m << ',';
  out << '#';
  for (const token_queue& q : s.pending) {
    for (const auto& [d, k] : q) out << d << '=' << k << ',';
    out << '|';
  }
  return out.str();
}

std::string to_string(const timed_petri_net& net, const firing_choice& choice) {
  if (choice.empty()) return "{}";
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [tr, n] : choice.counts) {
    if (!first) out << " + ";
    first = false;
    if (n != 1) out << n << ' ';
    out << net.transitions[tr].name;
  }
  out << '}';
  return out.str();
}

std::string to_string(const timed_petri_net& net, const net_state& s) {
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    if (s.marking[p] == 0) continue;
    if (!first) out << ", ";
    first = false;
    out << net.places[p].name << '=' << s.marking[p];
  }
  if (first) out << "empty";
  out << " | gc=" << s.gc << ']';
  return out.str();
}

}  // namespace tmpn
