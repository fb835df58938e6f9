#include "tmpn/translate.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace tmpn {

namespace {

constexpr std::uint64_t element_cap = 1u << 20;

std::string fresh_name(std::string base, const symbol_table& taken) {
  while (taken.find(base)) base += '_';
  return base;
}

}  // namespace

multiset psystem_detiming::project(const multiset& m) const {
  multiset out;
  for (const auto& [s, n] : m)
    if (s.id < projection.size() && projection[s.id]) out.add(*projection[s.id], n);
  return out;
}

psystem_detiming detime_psystem(const timed_psystem& sys) {
  psystem_detiming out;
  const int m = sys.max_delay();

  if (static_cast<std::uint64_t>(sys.alphabet.size()) * (1 + m) > element_cap)
    throw capacity_exceeded("detimed alphabet would exceed the element cap");

  timed_psystem& d = out.system;
  d.structure = sys.structure;
  d.initial = sys.initial;

  // original symbols first so they keep their ids and project to themselves
  for (const std::string& name : sys.alphabet.names()) d.alphabet.intern(name);
  out.projection.assign(sys.alphabet.size(), std::nullopt);
  for (std::uint32_t i = 0; i < sys.alphabet.size(); ++i) out.projection[i] = symbol{i};

  // the full staged grid a_j for 0 <= j < m, shared across rules
  std::vector<std::vector<symbol>> stage_sym(sys.alphabet.size());
  for (std::uint32_t a = 0; a < sys.alphabet.size(); ++a) {
    for (int j = 0; j < m; ++j) {
      symbol s = d.alphabet.intern(
          fresh_name(sys.alphabet.names()[a] + "_" + std::to_string(j), d.alphabet));
      stage_sym[a].push_back(s);
      out.projection.push_back(std::nullopt);
      out.staged.emplace(s.id, staged_symbol{symbol{a}, j});
    }
  }

  auto staged_copy = [&](const multiset& ms, int stage) {
    multiset r;
    for (const auto& [s, n] : ms) r.add(stage_sym[s.id][stage], n);
    return r;
  };

  // ticking rules are needed for every (symbol, stage) a delayed product can
  // reach: stages e(r)-1 down to 0 for each symbol in that rule's products
  std::set<std::pair<std::uint32_t, int>> needed;
  for (const rule& r : sys.rules) {
    if (r.delay == 0) continue;
    auto note = [&](const multiset& ms) {
      for (const auto& [s, n] : ms) {
        (void)n;
        for (int j = 0; j < r.delay; ++j) needed.emplace(s.id, j);
      }
    };
    note(r.rhs_here);
    note(r.rhs_out);
    for (const auto& [child, ms] : r.rhs_in) {
      (void)child;
      note(ms);
    }
  }

  for (const rule& r : sys.rules) {
    rule nr = r;
    nr.delay = 0;
    if (r.delay > 0) {
      nr.rhs_here = staged_copy(r.rhs_here, r.delay - 1);
      nr.rhs_out = staged_copy(r.rhs_out, r.delay - 1);
      for (auto& [child, ms] : nr.rhs_in) ms = staged_copy(r.rhs_in.at(child), r.delay - 1);
    }
    d.rules.push_back(std::move(nr));
  }

  std::set<std::string> rule_names;
  for (const rule& r : d.rules) rule_names.insert(r.name);
  for (int membrane = 1; membrane <= sys.structure.n; ++membrane) {
    for (std::uint32_t a = 0; a < sys.alphabet.size(); ++a) {
      for (int j = m - 1; j >= 0; --j) {
        if (!needed.count({a, j})) continue;
        rule tick;
        std::string name = "tick_" + sys.alphabet.names()[a] + "_" + std::to_string(j) + "_m" +
                           std::to_string(membrane);
        while (rule_names.count(name)) name += '_';
        rule_names.insert(name);
        tick.name = std::move(name);
        tick.home = membrane;
        tick.lhs.add(stage_sym[a][j], 1);
        tick.rhs_here.add(j == 0 ? symbol{a} : stage_sym[a][j - 1], 1);
        tick.delay = 0;
        d.rules.push_back(std::move(tick));
      }
    }
  }

  d.finalize();
  return out;
}

petri_detiming detime_petri(const timed_petri_net& net) {
  petri_detiming out;
  timed_petri_net& d = out.net;

  std::uint64_t extra_places = 0, extra_transitions = 0;
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    if (net.transitions[t].delay <= 0 || net.post[t].empty()) continue;
    extra_places += static_cast<std::uint64_t>(net.transitions[t].delay) * net.post[t].size();
    extra_transitions += static_cast<std::uint64_t>(net.transitions[t].delay);
  }
  if (net.places.size() + extra_places > element_cap ||
      net.transitions.size() + extra_transitions > element_cap)
    throw capacity_exceeded("detimed net would exceed the element cap");

  d.places = net.places;
  d.initial_marking = net.initial_marking;
  out.place_projection.resize(net.places.size());
  for (std::size_t p = 0; p < net.places.size(); ++p) out.place_projection[p] = p;

  d.transitions = net.transitions;
  for (transition_decl& t : d.transitions) t.delay = 0;
  d.pre = net.pre;
  d.post.assign(net.transitions.size(), {});
  out.transition_projection.resize(net.transitions.size());
  for (std::size_t t = 0; t < net.transitions.size(); ++t) out.transition_projection[t] = t;

  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    const int delay = net.transitions[t].delay;
    if (delay <= 0 || net.post[t].empty()) {
      // nothing to buffer: with no products a delay is unobservable
      d.post[t] = net.post[t];
      continue;
    }

    // buffer places stage_place[q][j] for each product place q
    std::vector<std::vector<std::size_t>> stage_place(net.post[t].size());
    for (std::size_t q = 0; q < net.post[t].size(); ++q) {
      const std::string& dest = net.places[net.post[t][q].place].name;
      for (int j = 0; j < delay; ++j) {
        std::size_t id = d.places.size();
        d.places.push_back(
            {dest + "^" + std::to_string(j) + "_" + net.transitions[t].name});
        d.initial_marking.push_back(0);
        out.place_projection.push_back(std::nullopt);
        out.chain_places.emplace(id, chain_place_info{net.post[t][q].place, t, j});
        stage_place[q].push_back(id);
      }
    }

    // the original transition now feeds the top of every buffer chain
    for (std::size_t q = 0; q < net.post[t].size(); ++q)
      d.post[t].push_back({stage_place[q][delay - 1], net.post[t][q].weight});

    // one shared relay per stage moves every product down one stage
    for (int j = 0; j < delay; ++j) {
      std::size_t id = d.transitions.size();
      d.transitions.push_back({net.transitions[t].name + "^" + std::to_string(j),
                               net.transitions[t].locality, 0});
      out.transition_projection.push_back(std::nullopt);
      out.chain_transitions.emplace(id, chain_transition_info{t, j});
      d.pre.emplace_back();
      d.post.emplace_back();
      for (std::size_t q = 0; q < net.post[t].size(); ++q) {
        d.pre.back().push_back({stage_place[q][j], net.post[t][q].weight});
        d.post.back().push_back(
            {j == 0 ? net.post[t][q].place : stage_place[q][j - 1], net.post[t][q].weight});
      }
    }
  }

  d.finalize();
  return out;
}

firing_choice psystem_translation::to_net_choice(const step_choice& choice) const {
  firing_choice u;
  for (const auto& [rid, n] : choice.counts) u.counts.emplace(transition_of_rule.at(rid), n);
  return u;
}

psystem_translation psystem_to_petri(const timed_psystem& sys) {
  psystem_translation out;
  out.membranes = sys.structure.n;
  timed_petri_net& net = out.net;

  if (static_cast<std::uint64_t>(sys.alphabet.size()) * sys.structure.n > element_cap)
    throw capacity_exceeded("translated net would exceed the element cap");

  for (std::uint32_t a = 0; a < sys.alphabet.size(); ++a)
    for (int i = 1; i <= sys.structure.n; ++i) {
      net.places.push_back({"(" + sys.alphabet.names()[a] + "," + std::to_string(i) + ")"});
      net.initial_marking.push_back(sys.initial[i - 1].count(symbol{a}));
      out.place_meaning.emplace_back(symbol{a}, i);
    }

  for (std::size_t rid = 0; rid < sys.rules.size(); ++rid) {
    const rule& r = sys.rules[rid];
    std::size_t t = net.transitions.size();
    net.transitions.push_back(
        {"tr^{" + r.name + "}_" + std::to_string(r.home), r.home, r.delay});
    out.transition_of_rule.push_back(t);

    net.pre.emplace_back();
    for (const auto& [s, n] : r.lhs) net.pre.back().push_back({out.place_of(s, r.home), n});

    std::map<std::size_t, count_t> products;
    auto emit = (
        [&](const multiset& ms, int membrane) {
          if (membrane == environment_label) return;  // out of the skin: tokens leave the net
          for (const auto& [s, n] : ms) products[out.place_of(s, membrane)] += n;
        });
    emit(r.rhs_here, r.home);
    emit(r.rhs_out, sys.structure.parent[r.home]);
    for (const auto& [child, ms] : r.rhs_in) emit(ms, child);

    net.post.emplace_back();
    for (const auto& [p, w] : products) net.post.back().push_back({p, w});
  }

  net.finalize();
  return out;
}

}  // namespace tmpn
