#include "tmpn/json_io.hpp"

#include <string>

namespace tmpn {

namespace {

using nlohmann::json;

json mset_to_json(const multiset& m, const symbol_table& table) {
  json j = json::object();
  for (const auto& [s, n] : m) j[table.name(s)] = n;
  return j;
}

multiset mset_from_json(const json& j, const symbol_table& table) {
  if (!j.is_object()) throw validation_error("a multiset must be a JSON object");
  multiset m;
  for (const auto& [name, count] : j.items()) {
    auto s = table.find(name);
    if (!s) throw validation_error("symbol " + name + " is not in the alphabet");
    if (!count.is_number_unsigned()) throw validation_error("counts must be unsigned integers");
    m.add(*s, count.get<count_t>());
  }
  return m;
}

json delay_queue_to_json(const delay_queue& q, const symbol_table& table) {
  json j = json::object();
  for (const auto& [d, ms] : q) j[std::to_string(d)] = mset_to_json(ms, table);
  return j;
}

delay_queue delay_queue_from_json(const json& j, const symbol_table& table) {
  delay_queue q;
  for (const auto& [key, val] : j.items()) {
    int d = std::stoi(key);
    if (d < 0) throw validation_error("pending delays must be non-negative");
    multiset ms = mset_from_json(val, table);
    if (!ms.empty()) q.emplace(d, std::move(ms));
  }
  return q;
}

count_t get_count(const json& j, const char* what) {
  if (!j.is_number_unsigned()) throw validation_error(std::string(what) + " must be unsigned");
  return j.get<count_t>();
}

}  // namespace

// ---- models ----------------------------------------------------------------

json to_json(const timed_psystem& sys) {
  json rules = json::array();
  for (const rule& r : sys.rules) {
    json in = json::object();
    for (const auto& [child, ms] : r.rhs_in)
      in[std::to_string(child)] = mset_to_json(ms, sys.alphabet);
    rules.push_back({{"name", r.name},
                     {"home", r.home},
                     {"lhs", mset_to_json(r.lhs, sys.alphabet)},
                     {"rhs",
                      {{"here", mset_to_json(r.rhs_here, sys.alphabet)},
                       {"out", mset_to_json(r.rhs_out, sys.alphabet)},
                       {"in", in}}},
                     {"delay", r.delay}});
  }
  json parent = json::array();
  for (int i = 1; i <= sys.structure.n; ++i) parent.push_back(sys.structure.parent[i]);
  json initial = json::array();
  for (const multiset& m : sys.initial) initial.push_back(mset_to_json(m, sys.alphabet));
  return {{"kind", "psystem"},
          {"alphabet", sys.alphabet.names()},
          {"structure", {{"n", sys.structure.n}, {"parent", parent}}},
          {"initial", initial},
          {"rules", rules}};
}

timed_psystem psystem_from_json(const json& j) {
  if (j.value("kind", "") != "psystem") throw validation_error("kind must be \"psystem\"");
  timed_psystem sys;
  for (const auto& name : j.at("alphabet")) {
    std::string n = name.get<std::string>();
    if (sys.alphabet.find(n)) throw validation_error("duplicate symbol " + n);
    sys.alphabet.intern(n);
  }
  const json& st = j.at("structure");
  int n = st.at("n").get<int>();
  std::vector<std::pair<int, int>> parents;
  const json& par = st.at("parent");
  if (static_cast<int>(par.size()) != n)
    throw validation_error("parent array must have one entry per membrane");
  for (int i = 0; i < n; ++i) parents.emplace_back(i + 1, par[i].get<int>());
  sys.structure = membrane_structure::from_parents(parents);

  const json& init = j.at("initial");
  if (static_cast<int>(init.size()) != n)
    throw validation_error("initial array must have one entry per membrane");
  for (const auto& m : init) sys.initial.push_back(mset_from_json(m, sys.alphabet));

  for (const auto& rj : j.at("rules")) {
    rule r;
    r.name = rj.at("name").get<std::string>();
    r.home = rj.at("home").get<int>();
    r.lhs = mset_from_json(rj.at("lhs"), sys.alphabet);
    const json& rhs = rj.at("rhs");
    r.rhs_here = mset_from_json(rhs.at("here"), sys.alphabet);
    r.rhs_out = mset_from_json(rhs.at("out"), sys.alphabet);
    for (const auto& [child, ms] : rhs.at("in").items()) {
      multiset product = mset_from_json(ms, sys.alphabet);
      if (!product.empty()) r.rhs_in.emplace(std::stoi(child), std::move(product));
    }
    r.delay = rj.at("delay").get<int>();
    sys.rules.push_back(std::move(r));
  }
  sys.finalize();
  return sys;
}

json to_json(const timed_petri_net& net) {
  json places = json::array(), transitions = json::array(), localities = json::array(),
       delays = json::array(), in = json::array(), out = json::array();
  for (const place_decl& p : net.places) places.push_back(p.name);
  for (const transition_decl& t : net.transitions) {
    transitions.push_back(t.name);
    localities.push_back(t.locality);
    delays.push_back(t.delay);
  }
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    json jin = json::object(), jout = json::object();
    for (const arc& a : net.pre[t]) jin[net.places[a.place].name] = a.weight;
    for (const arc& a : net.post[t]) jout[net.places[a.place].name] = a.weight;
    in.push_back(jin);
    out.push_back(jout);
  }
  json marking = json::object();
  for (std::size_t p = 0; p < net.places.size(); ++p)
    if (net.initial_marking[p] > 0) marking[net.places[p].name] = net.initial_marking[p];
  return {{"kind", "petri"},
          {"places", places},
          {"transitions", transitions},
          {"localities", localities},
          {"delays", delays},
          {"weights", {{"in", in}, {"out", out}}},
          {"initial_marking", marking}};
}

timed_petri_net petri_from_json(const json& j) {
  if (j.value("kind", "") != "petri") throw validation_error("kind must be \"petri\"");
  timed_petri_net net;
  for (const auto& p : j.at("places")) net.places.push_back({p.get<std::string>()});
  const json& trs = j.at("transitions");
  const json& locs = j.at("localities");
  const json& dls = j.at("delays");
  if (locs.size() != trs.size() || dls.size() != trs.size())
    throw validation_error("localities and delays must match the transition list");
  for (std::size_t t = 0; t < trs.size(); ++t)
    net.transitions.push_back(
        {trs[t].get<std::string>(), locs[t].get<int>(), dls[t].get<int>()});

  auto place_by_name = [&](const std::string& name) {
    for (std::size_t p = 0; p < net.places.size(); ++p)
      if (net.places[p].name == name) return p;
    throw validation_error("unknown place " + name);
  };
  const json& win = j.at("weights").at("in");
  const json& wout = j.at("weights").at("out");
  if (win.size() != trs.size() || wout.size() != trs.size())
    throw validation_error("weight arrays must match the transition list");
  net.pre.resize(trs.size());
  net.post.resize(trs.size());
  for (std::size_t t = 0; t < trs.size(); ++t) {
    for (const auto& [name, w] : win[t].items())
      net.pre[t].push_back({place_by_name(name), get_count(w, "an arc weight")});
    for (const auto& [name, w] : wout[t].items())
      net.post[t].push_back({place_by_name(name), get_count(w, "an arc weight")});
  }
  net.initial_marking.assign(net.places.size(), 0);
  for (const auto& [name, v] : j.at("initial_marking").items())
    net.initial_marking[place_by_name(name)] = get_count(v, "a token count");
  net.finalize();
  return net;
}

// ---- states ----------------------------------------------------------------

json to_json(const timed_psystem& sys, const configuration& c) {
  json contents = json::array(), pending = json::array();
  for (const multiset& m : c.contents) contents.push_back(mset_to_json(m, sys.alphabet));
  for (const delay_queue& q : c.pending) pending.push_back(delay_queue_to_json(q, sys.alphabet));
  return {{"contents", contents},
          {"pending", pending},
          {"environment", mset_to_json(c.environment, sys.alphabet)},
          {"environment_pending", delay_queue_to_json(c.environment_pending, sys.alphabet)},
          {"clock", c.clock}};
}

configuration configuration_from_json(const timed_psystem& sys, const json& j) {
  configuration c;
  const json& contents = j.at("contents");
  const json& pending = j.at("pending");
  if (static_cast<int>(contents.size()) != sys.structure.n ||
      static_cast<int>(pending.size()) != sys.structure.n)
    throw validation_error("contents and pending must have one entry per membrane");
  for (const auto& m : contents) c.contents.push_back(mset_from_json(m, sys.alphabet));
  for (const auto& q : pending) c.pending.push_back(delay_queue_from_json(q, sys.alphabet));
  c.environment = mset_from_json(j.at("environment"), sys.alphabet);
  c.environment_pending = delay_queue_from_json(j.at("environment_pending"), sys.alphabet);
  c.clock = j.at("clock").get<long long>();
  return c;
}

json to_json(const timed_petri_net& net, const net_state& s) {
  json marking = json::object(), pending = json::object();
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    if (s.marking[p] > 0) marking[net.places[p].name] = s.marking[p];
    if (!s.pending[p].empty()) {
      json q = json::object();
      for (const auto& [d, n] : s.pending[p]) q[std::to_string(d)] = n;
      pending[net.places[p].name] = q;
    }
  }
  return {{"marking", marking}, {"pending", pending}, {"gc", s.gc}};
}

net_state net_state_from_json(const timed_petri_net& net, const json& j) {
  net_state s;
  s.marking.assign(net.places.size(), 0);
  s.pending.assign(net.places.size(), {});
  for (const auto& [name, v] : j.at("marking").items()) {
    auto p = net.place_id(name);
    if (!p) throw validation_error("unknown place " + name);
    s.marking[*p] = get_count(v, "a token count");
  }
  for (const auto& [name, q] : j.at("pending").items()) {
    auto p = net.place_id(name);
    if (!p) throw validation_error("unknown place " + name);
    for (const auto& [key, v] : q.items()) {
      int d = std::stoi(key);
      if (d < 0) throw validation_error("pending delays must be non-negative");
      count_t n = get_count(v, "a token count");
      if (n > 0) s.pending[*p][d] = n;
    }
  }
  s.gc = j.at("gc").get<long long>();
  return s;
}

// ---- choices ---------------------------------------------------------------

json to_json(const timed_psystem& sys, const step_choice& choice) {
  json j = json::object();
  for (const auto& [rid, n] : choice.counts) j[sys.rules[rid].name] = n;
  return j;
}

step_choice step_choice_from_json(const timed_psystem& sys, const json& j) {
  step_choice choice;
  for (const auto& [name, n] : j.items()) {
    std::size_t rid = sys.rules.size();
    for (std::size_t i = 0; i < sys.rules.size(); ++i)
      if (sys.rules[i].name == name) {
        rid = i;
        break;
      }
    if (rid == sys.rules.size()) throw validation_error("unknown rule " + name);
    count_t c = get_count(n, "an occurrence count");
    if (c > 0) choice.counts[rid] = c;
  }
  return choice;
}

json to_json(const timed_petri_net& net, const firing_choice& choice) {
  json j = json::object();
  for (const auto& [tr, n] : choice.counts) j[net.transitions[tr].name] = n;
  return j;
}

firing_choice firing_choice_from_json(const timed_petri_net& net, const json& j) {
  firing_choice choice;
  for (const auto& [name, n] : j.items()) {
    auto tr = net.transition_id(name);
    if (!tr) throw validation_error("unknown transition " + name);
    count_t c = get_count(n, "an occurrence count");
    if (c > 0) choice.counts[*tr] = c;
  }
  return choice;
}

// ---- verdicts and correspondence maps ----------------------------------------

json to_json(const verdict& v) {
  json j = {{"ok", v.ok},
            {"property", v.property},
            {"depth_checked", v.depth_checked},
            {"detail", v.detail},
            {"witness", v.witness}};
  j["fail_depth"] = v.fail_depth ? json(*v.fail_depth) : json(nullptr);
  return j;
}

json map_to_json(const psystem_detiming& d, const timed_psystem& source) {
  json symbols = json::object();
  for (std::uint32_t id = 0; id < d.system.alphabet.size(); ++id) {
    const std::string& name = d.system.alphabet.name({id});
    if (d.projection[id]) {
      symbols[name] = {{"projects_to", source.alphabet.name(*d.projection[id])}};
    } else {
      const staged_symbol& st = d.staged.at(id);
      symbols[name] = {{"projects_to", nullptr},
                       {"buffers", source.alphabet.name(st.base)},
                       {"stage", st.stage}};
    }
  }
  return {{"type", "psystem-detiming"}, {"symbols", symbols}};
}

json map_to_json(const petri_detiming& d, const timed_petri_net& source) {
  json places = json::object(), transitions = json::object();
  for (std::size_t p = 0; p < d.net.places.size(); ++p) {
    const std::string& name = d.net.places[p].name;
    if (d.place_projection[p]) {
      places[name] = {{"projects_to", source.places[*d.place_projection[p]].name}};
    } else {
      const chain_place_info& info = d.chain_places.at(p);
      places[name] = {{"projects_to", nullptr},
                      {"buffers", source.places[info.place].name},
                      {"owner", source.transitions[info.transition].name},
                      {"stage", info.stage}};
    }
  }
  for (std::size_t t = 0; t < d.net.transitions.size(); ++t) {
    const std::string& name = d.net.transitions[t].name;
    if (d.transition_projection[t]) {
      transitions[name] = {
          {"projects_to", source.transitions[*d.transition_projection[t]].name}};
    } else {
      const chain_transition_info& info = d.chain_transitions.at(t);
      transitions[name] = {{"projects_to", nullptr},
                           {"owner", source.transitions[info.transition].name},
                           {"stage", info.stage}};
    }
  }
  return {{"type", "petri-detiming"}, {"places", places}, {"transitions", transitions}};
}

json map_to_json(const psystem_translation& t, const timed_psystem& source) {
  json places = json::object(), transitions = json::object();
  for (std::size_t p = 0; p < t.net.places.size(); ++p)
    places[t.net.places[p].name] = {
        {"symbol", source.alphabet.name(t.place_meaning[p].first)},
        {"membrane", t.place_meaning[p].second}};
  for (std::size_t r = 0; r < t.transition_of_rule.size(); ++r)
    transitions[t.net.transitions[t.transition_of_rule[r]].name] = {
        {"rule", source.rules[r].name}};
  return {{"type", "step-correspondence"}, {"places", places}, {"transitions", transitions}};
}

}  // namespace tmpn
