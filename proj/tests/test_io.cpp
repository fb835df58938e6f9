#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tmpn/dot.hpp"
#include "tmpn/dsl.hpp"
#include "tmpn/json_io.hpp"
#include "tmpn/random.hpp"

using namespace tmpn;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture(const char* name) { return slurp(std::string(TMPN_MODELS_DIR) + "/" + name); }

}  // namespace

TEST_CASE("json round trip for models") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    timed_psystem sys = random_psystem(psystem_params{}, seed);
    CHECK(psystem_from_json(to_json(sys)) == sys);
    timed_petri_net net = random_petri(petri_params{}, seed);
    CHECK(petri_from_json(to_json(net)) == net);
  }
}

TEST_CASE("json rejects mismatched kinds") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  CHECK_THROWS_AS(petri_from_json(to_json(sys)), validation_error);
}

TEST_CASE("json round trip for states and choices") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  configuration c = initial_configuration(sys);
  auto choice = enumerate_maximal(sys, c)[0];
  c = apply_step(sys, c, choice);  // has pending content and a nonzero clock
  CHECK(configuration_from_json(sys, to_json(sys, c)) == c);
  CHECK(step_choice_from_json(sys, to_json(sys, choice)) == choice);

  timed_petri_net net = parse_petri(fixture("delayed_echo.tpn"));
  net_state s = initial_state(net);
  auto firing = enumerate_max_enabled(net, s)[0];
  s = fire(net, s, firing);
  CHECK(net_state_from_json(net, to_json(net, s)) == s);
  CHECK(firing_choice_from_json(net, to_json(net, firing)) == firing);

  nlohmann::json bad = {{"r1", 1}, {"nope", 2}};
  CHECK_THROWS_AS(step_choice_from_json(sys, bad), validation_error);
}

TEST_CASE("verdict serialization distinguishes pass and fail") {
  verdict ok;
  ok.property = "step-correspondence";
  ok.depth_checked = 5;
  nlohmann::json j = to_json(ok);
  CHECK(j["ok"] == true);
  CHECK(j["fail_depth"].is_null());
  CHECK(j["witness"].is_null());

  verdict bad;
  bad.ok = false;
  bad.property = "psystem-detiming";
  bad.fail_depth = 3;
  bad.detail = "projected contents differ";
  bad.witness = {{"kind", "state-mismatch"}};
  j = to_json(bad);
  CHECK(j["ok"] == false);
  CHECK(j["fail_depth"] == 3);
  CHECK(j["witness"]["kind"] == "state-mismatch");
}

TEST_CASE("correspondence maps name every helper element") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));

  psystem_detiming d = detime_psystem(sys);
  nlohmann::json dm = map_to_json(d, sys);
  CHECK(dm["type"] == "psystem-detiming");
  CHECK(dm["symbols"]["a"]["projects_to"] == "a");
  CHECK(dm["symbols"]["a_1"]["projects_to"].is_null());
  CHECK(dm["symbols"]["a_1"]["buffers"] == "a");
  CHECK(dm["symbols"]["a_1"]["stage"] == 1);

  psystem_translation t = psystem_to_petri(sys);
  nlohmann::json tm = map_to_json(t, sys);
  CHECK(tm["type"] == "step-correspondence");
  CHECK(tm["places"]["(b,2)"]["symbol"] == "b");
  CHECK(tm["places"]["(b,2)"]["membrane"] == 2);
  CHECK(tm["transitions"]["tr^{r2}_2"]["rule"] == "r2");

  timed_petri_net net = parse_petri(fixture("delayed_echo.tpn"));
  petri_detiming pd = detime_petri(net);
  nlohmann::json pm = map_to_json(pd, net);
  CHECK(pm["type"] == "petri-detiming");
  CHECK(pm["places"]["(a,1)"]["projects_to"] == "(a,1)");
  CHECK(pm["places"]["(a,1)^0_tr2"]["buffers"] == "(a,1)");
  CHECK(pm["places"]["(a,1)^0_tr2"]["owner"] == "tr2");
  CHECK(pm["transitions"]["tr2^1"]["stage"] == 1);
}

TEST_CASE("graphviz rendering of a net") {
  timed_petri_net net = parse_petri(fixture("branching.tpn"));
  std::string dot = to_dot(net);
  CHECK(dot.find("digraph net {") == 0);
  CHECK(dot.find("p0 [shape=ellipse, label=\"p\\n3\"]") != std::string::npos);
  CHECK(dot.find("t0 [shape=box, label=\"tr_a@0\"]") != std::string::npos);
  CHECK(dot.find("p0 -> t1 [label=\"2\"];") != std::string::npos);
  CHECK(dot.find("subgraph cluster_loc1") != std::string::npos);
  // weight-1 arcs carry no label
  CHECK(dot.find("p0 -> t0;") != std::string::npos);
}

TEST_CASE("quoted characters survive the dot escaping") {
  timed_petri_net net = parse_petri(
      "petri { place \"a \\\"b\\\"\"; transition t loc=1 @0; arc \"a \\\"b\\\"\" -1-> t; }");
  std::string dot = to_dot(net);
  CHECK(dot.find("label=\"a \\\"b\\\"") != std::string::npos);
}
