#include "tmpn/random.hpp"

#include <algorithm>
#include <string>

namespace tmpn {

namespace {

// Drawn models feed bounded equivalence checks, so oversized draws are
// rejected: anything whose own 5-step graph passes 20000 states gets redrawn
// from the continuing stream. The bound leaves plenty of headroom under the
// checks' default state budget.
constexpr int probe_depth = 5;
constexpr std::size_t probe_budget = 20000;
constexpr int max_redraws = 32;

}  // namespace

timed_psystem random_psystem(const psystem_params& params, std::uint64_t seed) {
  rng64 rng(seed);
  for (int attempt = 0; attempt < max_redraws; ++attempt) {
    timed_psystem sys = draw_psystem(params, rng);
    try {
      run_graph(sys, probe_depth, probe_budget);
      return sys;
    } catch (const budget_exceeded&) {
      // redraw
    }
  }
  throw validation_error("every redraw for this seed explodes within 5 steps");
}

timed_psystem draw_psystem(const psystem_params& params, rng64& rng) {
  timed_psystem sys;

  const int n = rng.range(1, params.max_membranes);
  std::vector<std::pair<int, int>> parents;
  parents.emplace_back(1, environment_label);  // membrane 1 is the skin
  for (int i = 2; i <= n; ++i) parents.emplace_back(i, rng.range(1, i - 1));
  sys.structure = membrane_structure::from_parents(parents);

  const int nsym = rng.range(1, params.max_symbols);
  std::vector<symbol> syms;
  for (int i = 0; i < nsym; ++i)
    syms.push_back(sys.alphabet.intern(std::string(1, static_cast<char>('a' + i))));

  auto random_symbol = [&] { return syms[rng.below(syms.size())]; };

  const int nrules = rng.range(1, params.max_rules);
  for (int r = 0; r < nrules; ++r) {
    rule nr;
    nr.name = "r" + std::to_string(r + 1);
    nr.home = rng.range(1, n);
    const int lhs_objects = rng.range(1, params.max_lhs);
    for (int i = 0; i < lhs_objects; ++i) nr.lhs.add(random_symbol(), 1);

    const auto& children = sys.structure.children[nr.home];
    const int rhs_objects = rng.range(0, params.max_rhs);
    for (int i = 0; i < rhs_objects; ++i) {
      symbol s = random_symbol();
      // here | out | in each child
      int pick = rng.range(0, 1 + static_cast<int>(children.size()));
      if (pick == 0)
        nr.rhs_here.add(s, 1);
      else if (pick == 1)
        nr.rhs_out.add(s, 1);
      else
        nr.rhs_in[children[pick - 2]].add(s, 1);
    }
    nr.delay = rng.range(0, params.max_delay);
    sys.rules.push_back(std::move(nr));
  }

  sys.initial.assign(n, {});
  const int tokens = rng.range(0, params.token_budget);
  for (int i = 0; i < tokens; ++i)
    sys.initial[rng.below(static_cast<std::uint64_t>(n))].add(random_symbol(), 1);
  // make dead systems rare: half the rules get their trigger planted at home
  for (const rule& r : sys.rules)
    if (rng.below(2) == 0) sys.initial[r.home - 1].add(r.lhs);

  sys.finalize();
  return sys;
}

timed_petri_net random_petri(const petri_params& params, std::uint64_t seed) {
  rng64 rng(seed);
  for (int attempt = 0; attempt < max_redraws; ++attempt) {
    timed_petri_net net = draw_petri(params, rng);
    try {
      run_graph(net, probe_depth, probe_budget);
      return net;
    } catch (const budget_exceeded&) {
      // redraw
    }
  }
  throw validation_error("every redraw for this seed explodes within 5 steps");
}

timed_petri_net draw_petri(const petri_params& params, rng64& rng) {
  timed_petri_net net;

  const int np = rng.range(1, params.max_places);
  for (int p = 0; p < np; ++p) net.places.push_back({"p" + std::to_string(p + 1)});

  const int nt = rng.range(1, params.max_transitions);
  for (int t = 0; t < nt; ++t) {
    net.transitions.push_back({"t" + std::to_string(t + 1), rng.range(0, params.max_locality),
                               rng.range(0, params.max_delay)});
    std::vector<std::size_t> ids(np);
    for (int p = 0; p < np; ++p) ids[p] = p;
    // sample distinct endpoints by a partial shuffle
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
      std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);

    net.pre.emplace_back();
    const int nin = std::min(np, rng.range(1, params.max_inputs));
    for (int i = 0; i < nin; ++i)
      net.pre.back().push_back(
          {ids[i], 1 + rng.below(params.max_weight)});

    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
      std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
    net.post.emplace_back();
    const int nout = std::min(np, rng.range(0, params.max_outputs));
    for (int i = 0; i < nout; ++i)
      net.post.back().push_back({ids[i], 1 + rng.below(params.max_weight)});
  }

  net.initial_marking.assign(np, 0);
  const int tokens = rng.range(0, params.token_budget);
  for (int i = 0; i < tokens; ++i) ++net.initial_marking[rng.below(static_cast<std::uint64_t>(np))];
  // make dead nets rare: half the transitions start enabled
  for (std::size_t t = 0; t < net.transitions.size(); ++t)
    if (rng.below(2) == 0)
      for (const arc& a : net.pre[t]) net.initial_marking[a.place] += a.weight;

  net.finalize();
  return net;
}

}  // namespace tmpn
