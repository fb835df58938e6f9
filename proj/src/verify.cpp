#include "tmpn/verify.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tmpn/json_io.hpp"

namespace tmpn {

// ---- reference oracles ----------------------------------------------------
//
// These recompute applicability and maximality from first principles over
// the full grid of count vectors, sharing no logic with the DFS enumerators.

std::vector<step_choice> oracle_maximal_psystem(const timed_psystem& sys, const configuration& c,
                                                std::uint64_t max_vectors) {
  const std::size_t nr = sys.rules.size();
  std::vector<count_t> cap(nr, 0);
  for (std::size_t r = 0; r < nr; ++r) {
    count_t k = std::numeric_limits<count_t>::max();
    for (const auto& [s, n] : sys.rules[r].lhs)
      k = std::min(k, c.contents[sys.rules[r].home - 1].count(s) / n);
    cap[r] = k;
  }
  std::uint64_t grid = 1;
  for (count_t k : cap) {
    if (k >= max_vectors || grid > max_vectors / (k + 1))
      throw capacity_exceeded("oracle grid larger than the documented cap");
    grid *= (k + 1);
  }

  // consumption check written independently: count demand per (membrane, symbol)
  auto applicable = [&](const std::vector<count_t>& v) {
    std::map<std::pair<int, std::uint32_t>, count_t> demand;
    for (std::size_t r = 0; r < nr; ++r)
      for (const auto& [s, n] : sys.rules[r].lhs) demand[{sys.rules[r].home, s.id}] += v[r] * n;
    for (const auto& [key, need] : demand)
      if (need > c.contents[key.first - 1].count(symbol{key.second})) return false;
    return true;
  };

  std::vector<step_choice> out;
  std::vector<count_t> v(nr, 0);
  while (true) {
    if (applicable(v)) {
      bool maximal = true;
      for (std::size_t r = 0; r < nr && maximal; ++r) {
        std::vector<count_t> plus = v;
        plus[r] += 1;
        if (applicable(plus)) maximal = false;
      }
      if (maximal) {
        step_choice ch;
        for (std::size_t r = 0; r < nr; ++r)
          if (v[r] > 0) ch.counts.emplace(r, v[r]);
        out.push_back(std::move(ch));
      }
    }
    std::size_t i = 0;
    while (i < nr && v[i] == cap[i]) v[i++] = 0;
    if (i == nr) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<firing_choice> oracle_maximal_petri(const timed_petri_net& net, const net_state& s,
                                                std::uint64_t max_vectors) {
  const std::size_t nt = net.transitions.size();
  std::vector<count_t> cap(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    count_t k = std::numeric_limits<count_t>::max();
    for (const arc& a : net.pre[t]) k = std::min(k, s.marking[a.place] / a.weight);
    cap[t] = k;
  }
  std::uint64_t grid = 1;
  for (count_t k : cap) {
    if (k >= max_vectors || grid > max_vectors / (k + 1))
      throw capacity_exceeded("oracle grid larger than the documented cap");
    grid *= (k + 1);
  }

  auto enabled = [&](const std::vector<count_t>& v) {
    std::map<std::size_t, count_t> demand;
    for (std::size_t t = 0; t < nt; ++t)
      for (const arc& a : net.pre[t]) demand[a.place] += v[t] * a.weight;
    for (const auto& [p, need] : demand)
      if (need > s.marking[p]) return false;
    return true;
  };

  std::vector<firing_choice> out;
  std::vector<count_t> v(nt, 0);
  while (true) {
    if (enabled(v)) {
      bool maximal = true;
      for (std::size_t t = 0; t < nt && maximal; ++t) {
        std::vector<count_t> plus = v;
        plus[t] += 1;
        if (enabled(plus)) maximal = false;
      }
      if (maximal) {
        firing_choice ch;
        for (std::size_t t = 0; t < nt; ++t)
          if (v[t] > 0) ch.counts.emplace(t, v[t]);
        out.push_back(std::move(ch));
      }
    }
    std::size_t i = 0;
    while (i < nt && v[i] == cap[i]) v[i++] = 0;
    if (i == nt) break;
    ++v[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- detiming checks --------------------------------------------------------

namespace {

// canonical key of membrane contents after applying a symbol projection
std::string projected_contents_key(const std::vector<multiset>& contents,
                                   const std::vector<std::optional<symbol>>* projection) {
  std::ostringstream out;
  for (const multiset& m : contents) {
    if (projection == nullptr) {
      for (const auto& [s, n] : m) out << s.id << ':' << n << ',';
    } else {
      multiset proj;
      for (const auto& [s, n] : m)
        if (s.id < projection->size() && (*projection)[s.id]) proj.add(*(*projection)[s.id], n);
      for (const auto& [s, n] : proj) out << s.id << ':' << n << ',';
    }
    out << '|';
  }
  return out.str();
}

nlohmann::json contents_json(const timed_psystem& sys, const std::vector<multiset>& contents,
                             const std::vector<std::optional<symbol>>* projection,
                             const symbol_table& target_names) {
  nlohmann::json j = nlohmann::json::object();
  for (int i = 1; i <= sys.structure.n; ++i) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [s, n] : contents[i - 1]) {
      if (projection == nullptr) {
        m[target_names.name(s)] = n;
      } else if (s.id < projection->size() && (*projection)[s.id]) {
        const std::string& name = target_names.name(*(*projection)[s.id]);
        m[name] = m.value(name, count_t{0}) + n;
      }
    }
    j[std::to_string(i)] = std::move(m);
  }
  return j;
}

template <class Graph, class Sys>
nlohmann::json path_json(const Graph& g, std::size_t node, const Sys& sys) {
  nlohmann::json choices = nlohmann::json::array();
  for (const auto& ch : g.path_to(node)) choices.push_back(to_json(sys, ch));
  return choices;
}

}  // namespace

verdict check_psystem_detiming_pair(const timed_psystem& timed, const timed_psystem& untimed,
                                    const std::vector<std::optional<symbol>>& projection,
                                    int depth, std::size_t budget) {
  verdict v;
  v.property = "psystem-detiming";
  v.depth_checked = depth;

  p_graph g1 = run_graph(timed, depth, budget);
  p_graph g2 = run_graph(untimed, depth, budget);

  for (int k = 0; k <= depth; ++k) {
    std::map<std::string, std::size_t> timed_set, untimed_set;
    if (static_cast<std::size_t>(k) < g1.layers.size())
      for (std::size_t id : g1.layers[k])
        timed_set.emplace(projected_contents_key(g1.states[id].contents, nullptr), id);
    if (static_cast<std::size_t>(k) < g2.layers.size())
      for (std::size_t id : g2.layers[k])
        untimed_set.emplace(projected_contents_key(g2.states[id].contents, &projection), id);

    auto report = [&](const std::string& side, std::size_t node, const std::string& missing_from) {
      v.ok = false;
      v.fail_depth = k;
      nlohmann::json w;
      w["fail_depth"] = k;
      w["missing_from"] = missing_from;
      if (side == "timed") {
        w["projected_contents"] =
            contents_json(timed, g1.states[node].contents, nullptr, timed.alphabet);
        w["replay"] = {{"side", "timed"}, {"choices", path_json(g1, node, timed)}};
      } else {
        w["projected_contents"] =
            contents_json(untimed, g2.states[node].contents, &projection, timed.alphabet);
        w["replay"] = {{"side", "untimed"}, {"choices", path_json(g2, node, untimed)}};
      }
      v.witness = std::move(w);
      v.detail = "projected contents reachable on the " + side + " side at depth " +
                 std::to_string(k) + " are unreachable on the " + missing_from + " side";
    };

    for (const auto& [key, node] : timed_set)
      if (!untimed_set.count(key)) {
        report("timed", node, "untimed");
        return v;
      }
    for (const auto& [key, node] : untimed_set)
      if (!timed_set.count(key)) {
        report("untimed", node, "timed");
        return v;
      }
  }
  v.detail = "projected reachable contents agree at every depth up to " + std::to_string(depth);
  return v;
}

verdict check_psystem_detiming(const timed_psystem& sys, int depth, std::size_t budget) {
  psystem_detiming d = detime_psystem(sys);
  return check_psystem_detiming_pair(sys, d.system, d.projection, depth, budget);
}

namespace {

std::vector<count_t> project_marking(const std::vector<count_t>& marking,
                                     const std::vector<std::optional<std::size_t>>* projection,
                                     std::size_t target_places) {
  std::vector<count_t> out(target_places, 0);
  if (projection == nullptr) {
    for (std::size_t p = 0; p < marking.size() && p < target_places; ++p) out[p] = marking[p];
  } else {
    for (std::size_t p = 0; p < marking.size(); ++p)
      if (p < projection->size() && (*projection)[p]) out[(*projection)[p].value()] += marking[p];
  }
  return out;
}

std::string marking_key(const std::vector<count_t>& m) {
  std::ostringstream out;
  for (count_t k : m) out << k << ',';
  return out.str();
}

nlohmann::json marking_json(const timed_petri_net& target_names, const std::vector<count_t>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t p = 0; p < m.size(); ++p) j[target_names.places[p].name] = m[p];
  return j;
}

}  // namespace

verdict check_petri_detiming_pair(const timed_petri_net& timed, const timed_petri_net& untimed,
                                  const std::vector<std::optional<std::size_t>>& place_projection,
                                  int depth, std::size_t budget) {
  verdict v;
  v.property = "petri-detiming";
  v.depth_checked = depth;

  pn_graph g1 = run_graph(timed, depth, budget);
  pn_graph g2 = run_graph(untimed, depth, budget);

  for (int k = 0; k <= depth; ++k) {
    std::map<std::string, std::size_t> timed_set, untimed_set;
    if (static_cast<std::size_t>(k) < g1.layers.size())
      for (std::size_t id : g1.layers[k])
        timed_set.emplace(
            marking_key(project_marking(g1.states[id].marking, nullptr, timed.places.size())), id);
    if (static_cast<std::size_t>(k) < g2.layers.size())
      for (std::size_t id : g2.layers[k])
        untimed_set.emplace(
            marking_key(project_marking(g2.states[id].marking, &place_projection,
                                        timed.places.size())),
            id);

    auto report = [&](const std::string& side, std::size_t node, const std::string& missing_from) {
      v.ok = false;
      v.fail_depth = k;
      nlohmann::json w;
      w["fail_depth"] = k;
      w["missing_from"] = missing_from;
      if (side == "timed") {
        w["projected_marking"] = marking_json(
            timed, project_marking(g1.states[node].marking, nullptr, timed.places.size()));
        w["replay"] = {{"side", "timed"}, {"choices", path_json(g1, node, timed)}};
      } else {
        w["projected_marking"] = marking_json(
            timed,
            project_marking(g2.states[node].marking, &place_projection, timed.places.size()));
        w["replay"] = {{"side", "untimed"}, {"choices", path_json(g2, node, untimed)}};
      }
      v.witness = std::move(w);
      v.detail = "projected marking reachable on the " + side + " side at depth " +
                 std::to_string(k) + " is unreachable on the " + missing_from + " side";
    };

    for (const auto& [key, node] : timed_set)
      if (!untimed_set.count(key)) {
        report("timed", node, "untimed");
        return v;
      }
    for (const auto& [key, node] : untimed_set)
      if (!timed_set.count(key)) {
        report("untimed", node, "timed");
        return v;
      }
  }
  v.detail = "projected reachable markings agree at every depth up to " + std::to_string(depth);
  return v;
}

verdict check_petri_detiming(const timed_petri_net& net, int depth, std::size_t budget) {
  petri_detiming d = detime_petri(net);
  return check_petri_detiming_pair(net, d.net, d.place_projection, depth, budget);
}

// ---- lockstep correspondence ----------------------------------------------

namespace {

// first point where a configuration and a net state disagree, if any
std::optional<nlohmann::json> correspondence_mismatch(const psystem_translation& tr,
                                                      const configuration& c,
                                                      const net_state& s) {
  auto fail = [&](const std::string& what, const std::string& place, count_t want, count_t got) {
    nlohmann::json j;
    j["what"] = what;
    j["place"] = place;
    j["psystem_value"] = want;
    j["net_value"] = got;
    return j;
  };

  for (std::size_t p = 0; p < tr.place_meaning.size(); ++p) {
    const auto& [a, i] = tr.place_meaning[p];
    count_t want = c.contents[i - 1].count(a);
    if (want != s.marking[p])
      return fail("contents vs marking", tr.net.places[p].name, want, s.marking[p]);

    // pending tokens per remaining delay must agree as well
    token_queue from_psystem;
    for (const auto& [d, ms] : c.pending[i - 1]) {
      count_t n = ms.count(a);
      if (n > 0) from_psystem[d] = n;
    }
    if (from_psystem != s.pending[p]) {
      // report the first differing delay slot
      int delay = 0;
      count_t want_k = 0, got_k = 0;
      for (const auto& [d, n] : from_psystem) {
        auto it = s.pending[p].find(d);
        if (it == s.pending[p].end() || it->second != n) {
          delay = d;
          want_k = n;
          got_k = it == s.pending[p].end() ? 0 : it->second;
          break;
        }
      }
      if (want_k == got_k)
        for (const auto& [d, n] : s.pending[p])
          if (!from_psystem.count(d)) {
            delay = d;
            want_k = 0;
            got_k = n;
            break;
          }
      nlohmann::json j = fail("pending vs pending", tr.net.places[p].name, want_k, got_k);
      j["remaining_delay"] = delay;
      return j;
    }
  }
  if (c.clock != s.gc) {
    nlohmann::json j;
    j["what"] = "clock vs gc";
    j["psystem_value"] = c.clock;
    j["net_value"] = s.gc;
    return j;
  }
  return std::nullopt;
}

}  // namespace

verdict check_step_correspondence_pair(const timed_psystem& sys,
                                       const psystem_translation& tr, int depth,
                                       std::size_t budget) {
  verdict v;
  v.property = "step-correspondence";
  v.depth_checked = depth;

  struct node {
    configuration c;
    net_state s;
    int depth;
    std::optional<std::pair<std::size_t, step_choice>> parent;
  };
  std::vector<node> nodes;
  std::unordered_map<std::string, std::size_t> index;

  auto path_choices = [&](std::size_t id) {
    nlohmann::json arr = nlohmann::json::array();
    std::vector<step_choice> path;
    while (nodes[id].parent) {
      path.push_back(nodes[id].parent->second);
      id = nodes[id].parent->first;
    }
    std::reverse(path.begin(), path.end());
    for (const auto& ch : path) arr.push_back(to_json(sys, ch));
    return arr;
  };

  auto push = [&](configuration c, net_state s, int d,
                  std::optional<std::pair<std::size_t, step_choice>> via) {
    std::string key = state_key(c) + "~" + state_key(s);
    if (index.count(key)) return;
    if (nodes.size() >= budget)
      throw budget_exceeded("state budget exceeded (" + std::to_string(budget) + " pairs)");
    index.emplace(std::move(key), nodes.size());
    nodes.push_back({std::move(c), std::move(s), d, std::move(via)});
  };

  push(initial_configuration(sys), initial_state(tr.net), 0, std::nullopt);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int d = nodes[i].depth;
    configuration c = nodes[i].c;
    net_state s = nodes[i].s;

    if (auto mismatch = correspondence_mismatch(tr, c, s)) {
      v.ok = false;
      v.fail_depth = d;
      nlohmann::json w;
      w["fail_depth"] = d;
      w["kind"] = "state-mismatch";
      w["mismatch"] = *mismatch;
      w["replay"] = {{"choices", path_choices(i)}};
      v.witness = std::move(w);
      v.detail = "configuration and marking disagree at depth " + std::to_string(d) + ": " +
                 (*mismatch)["what"].get<std::string>();
      return v;
    }
    if (d >= depth) continue;

    std::vector<step_choice> a = enumerate_maximal(sys, c);
    std::vector<firing_choice> b = enumerate_max_enabled(tr.net, s);
    std::vector<firing_choice> mapped;
    mapped.reserve(a.size());
    for (const step_choice& ch : a) mapped.push_back(tr.to_net_choice(ch));
    std::sort(mapped.begin(), mapped.end());
    if (mapped != b) {
      v.ok = false;
      v.fail_depth = d;
      nlohmann::json w;
      w["fail_depth"] = d;
      w["kind"] = "choice-sets-differ";
      nlohmann::json ja = nlohmann::json::array(), jb = nlohmann::json::array();
      for (const step_choice& ch : a) ja.push_back(to_json(sys, ch));
      for (const firing_choice& ch : b) jb.push_back(to_json(tr.net, ch));
      w["psystem_choices"] = std::move(ja);
      w["net_choices"] = std::move(jb);
      w["replay"] = {{"choices", path_choices(i)}};
      v.witness = std::move(w);
      v.detail = "maximal choice sets are not in bijection at depth " + std::to_string(d);
      return v;
    }

    for (const step_choice& ch : a) {
      configuration c2 = apply_step(sys, c, ch);
      net_state s2 = fire(tr.net, s, tr.to_net_choice(ch));
      push(std::move(c2), std::move(s2), d + 1, std::make_pair(i, ch));
    }
  }

  v.detail = "choice sets biject and states correspond at every pair up to depth " +
             std::to_string(depth);
  return v;
}

verdict check_step_correspondence(const timed_psystem& sys, int depth, std::size_t budget) {
  psystem_translation tr = psystem_to_petri(sys);
  return check_step_correspondence_pair(sys, tr, depth, budget);
}

// ---- replays ----------------------------------------------------------------

namespace {

std::vector<step_choice> choices_from_json(const timed_psystem& sys, const nlohmann::json& arr) {
  std::vector<step_choice> out;
  for (const auto& j : arr) out.push_back(step_choice_from_json(sys, j));
  return out;
}

}  // namespace

bool replay_psystem_detiming(const verdict& v, const timed_psystem& timed,
                             const timed_psystem& untimed,
                             const std::vector<std::optional<symbol>>& projection) {
  if (v.ok) throw validation_error("nothing to replay: the verdict is ok");
  const nlohmann::json& w = v.witness;
  const std::string side = w.at("replay").at("side").get<std::string>();
  const timed_psystem& claimed = side == "timed" ? timed : untimed;

  configuration c = initial_configuration(claimed);
  for (const step_choice& ch : choices_from_json(claimed, w.at("replay").at("choices")))
    c = apply_step(claimed, c, ch);

  const auto* proj = side == "timed" ? nullptr : &projection;
  std::string key = projected_contents_key(c.contents, proj);

  // the projection must be absent from the other side's layer at that depth
  const int k = w.at("fail_depth").get<int>();
  const timed_psystem& other = side == "timed" ? untimed : timed;
  const auto* other_proj = side == "timed" ? &projection : nullptr;
  p_graph g = run_graph(other, k, default_state_budget);
  if (static_cast<std::size_t>(k) >= g.layers.size()) return true;
  for (std::size_t id : g.layers[k])
    if (projected_contents_key(g.states[id].contents, other_proj) == key) return false;
  return true;
}

bool replay_petri_detiming(const verdict& v, const timed_petri_net& timed,
                           const timed_petri_net& untimed,
                           const std::vector<std::optional<std::size_t>>& place_projection) {
  if (v.ok) throw validation_error("nothing to replay: the verdict is ok");
  const nlohmann::json& w = v.witness;
  const std::string side = w.at("replay").at("side").get<std::string>();
  const timed_petri_net& claimed = side == "timed" ? timed : untimed;

  net_state s = initial_state(claimed);
  for (const auto& j : w.at("replay").at("choices"))
    s = fire(claimed, s, firing_choice_from_json(claimed, j));

  const auto* proj = side == "timed" ? nullptr : &place_projection;
  std::string key = marking_key(project_marking(s.marking, proj, timed.places.size()));

  const int k = w.at("fail_depth").get<int>();
  const timed_petri_net& other = side == "timed" ? untimed : timed;
  const auto* other_proj = side == "timed" ? &place_projection : nullptr;
  pn_graph g = run_graph(other, k, default_state_budget);
  if (static_cast<std::size_t>(k) >= g.layers.size()) return true;
  for (std::size_t id : g.layers[k])
    if (marking_key(project_marking(g.states[id].marking, other_proj, timed.places.size())) == key)
      return false;
  return true;
}

bool replay_step_correspondence(const verdict& v, const timed_psystem& sys,
                                const psystem_translation& tr) {
  if (v.ok) throw validation_error("nothing to replay: the verdict is ok");
  const nlohmann::json& w = v.witness;

  configuration c = initial_configuration(sys);
  net_state s = initial_state(tr.net);
  for (const step_choice& ch : choices_from_json(sys, w.at("replay").at("choices"))) {
    net_state s2 = fire(tr.net, s, tr.to_net_choice(ch));
    c = apply_step(sys, c, ch);
    s = std::move(s2);
  }

  const std::string kind = w.at("kind").get<std::string>();
  if (kind == "state-mismatch") return correspondence_mismatch(tr, c, s).has_value();

  std::vector<step_choice> a = enumerate_maximal(sys, c);
  std::vector<firing_choice> b = enumerate_max_enabled(tr.net, s);
  std::vector<firing_choice> mapped;
  for (const step_choice& ch : a) mapped.push_back(tr.to_net_choice(ch));
  std::sort(mapped.begin(), mapped.end());
  return mapped != b;
}

bool replay(const verdict& v, const timed_psystem& source) {
  if (v.property == "psystem-detiming") {
    psystem_detiming d = detime_psystem(source);
    return replay_psystem_detiming(v, source, d.system, d.projection);
  }
  if (v.property == "step-correspondence") {
    psystem_translation tr = psystem_to_petri(source);
    return replay_step_correspondence(v, source, tr);
  }
  throw validation_error("verdict property " + v.property + " does not apply to a membrane system");
}

bool replay(const verdict& v, const timed_petri_net& source) {
  if (v.property != "petri-detiming")
    throw validation_error("verdict property " + v.property + " does not apply to a net");
  petri_detiming d = detime_petri(source);
  return replay_petri_detiming(v, source, d.net, d.place_projection);
}

}  // namespace tmpn
