#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tmpn/dsl.hpp"
#include "tmpn/petri.hpp"

using namespace tmpn;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

timed_petri_net load(const char* name) {
  return parse_petri(slurp(std::string(TMPN_MODELS_DIR) + "/" + name));
}

timed_petri_net skeleton() {
  timed_petri_net net;
  net.places = {{"p"}, {"q"}};
  net.transitions = {{"t", 1, 0}};
  net.pre = {{{0, 1}}};
  net.post = {{{1, 1}}};
  net.initial_marking = {1, 0};
  return net;
}

}  // namespace

TEST_CASE("net validation") {
  SUBCASE("well-formed") { CHECK_NOTHROW(skeleton().finalize()); }
  SUBCASE("duplicate place names") {
    auto net = skeleton();
    net.places[1].name = "p";
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
  SUBCASE("place and transition sharing a name") {
    auto net = skeleton();
    net.transitions[0].name = "q";
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
  SUBCASE("zero-weight arc") {
    auto net = skeleton();
    net.pre[0][0].weight = 0;
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
  SUBCASE("arc to an unknown place") {
    auto net = skeleton();
    net.post[0][0].place = 9;
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
  SUBCASE("duplicate arc") {
    auto net = skeleton();
    net.pre[0].push_back({0, 2});
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
  SUBCASE("transition without inputs would be enabled unboundedly often") {
    auto net = skeleton();
    net.pre[0].clear();
    CHECK_THROWS_AS(net.finalize(), validation_error);
  }
}

TEST_CASE("two-locality example: unique maximal step and exact markings") {
  timed_petri_net net = load("delayed_echo.tpn");
  net_state s0 = initial_state(net);
  CHECK(to_string(net, s0) == "[(a,1)=1, (b,1)=1, (a,2)=2, (b,2)=1 | gc=0]");

  auto choices = enumerate_max_enabled(net, s0);
  REQUIRE(choices.size() == 1);
  CHECK(to_string(net, choices[0]) == "{tr1 + 2 tr2}");

  // demand accounting for the unique step
  std::size_t a2 = net.place_id("(a,2)").value();
  std::size_t a1 = net.place_id("(a,1)").value();
  CHECK(pre_of(net, choices[0], a2) == 2);
  CHECK(pre_of(net, choices[0], a1) == 0);

  // a single tr2 occurrence leaves another one enabled
  firing_choice undersized{{{0, 1}, {1, 1}}};
  CHECK(is_enabled(net, s0, undersized));
  CHECK_FALSE(is_max_enabled(net, s0, undersized));

  net_state s1 = fire(net, s0, choices[0]);
  CHECK(to_string(net, s1) == "[(a,1)=1, (b,2)=2 | gc=1]");
  REQUIRE(s1.pending[a1].size() == 1);
  CHECK(s1.pending[a1].at(1) == 2);

  net_state s2 = fire(net, s1, enumerate_max_enabled(net, s1)[0]);
  CHECK(to_string(net, s2) == "[(a,1)=1, (b,2)=2 | gc=2]");
  CHECK(s2.pending[a1].at(0) == 2);

  net_state s3 = fire(net, s2, enumerate_max_enabled(net, s2)[0]);
  CHECK(to_string(net, s3) == "[(a,1)=3, (b,2)=2 | gc=3]");
  for (const auto& q : s3.pending) CHECK(q.empty());
}

TEST_CASE("branching example: two incomparable maximal steps") {
  timed_petri_net net = load("branching.tpn");
  auto choices = enumerate_max_enabled(net, initial_state(net));
  REQUIRE(choices.size() == 2);
  CHECK(to_string(net, choices[0]) == "{tr_a + tr_b}");
  CHECK(to_string(net, choices[1]) == "{3 tr_a}");
}

TEST_CASE("locality is an annotation, never a firing constraint") {
  timed_petri_net net = parse_petri(
      "petri { place p; place q;"
      " transition t1 loc=1 @0; transition t2 loc=9 @0;"
      " arc p -1-> t1; arc q -1-> t2;"
      " arc t1 -1-> q; arc t2 -1-> p;"
      " marking p=1, q=1; }");
  auto choices = enumerate_max_enabled(net, initial_state(net));
  REQUIRE(choices.size() == 1);
  // both fire together even though their localities differ
  CHECK(to_string(net, choices[0]) == "{t1 + t2}");
}

TEST_CASE("delayed tokens only surface when their delay runs out") {
  timed_petri_net net = parse_petri(
      "petri { place p; place q;"
      " transition t loc=1 @2;"
      " arc p -1-> t; arc t -3-> q;"
      " marking p=1; }");
  net_state s = initial_state(net);
  s = fire(net, s, enumerate_max_enabled(net, s)[0]);
  CHECK(s.marking == std::vector<count_t>{0, 0});
  s = fire(net, s, enumerate_max_enabled(net, s)[0]);
  CHECK(s.marking == std::vector<count_t>{0, 0});
  s = fire(net, s, enumerate_max_enabled(net, s)[0]);
  CHECK(s.marking == std::vector<count_t>{0, 3});
  CHECK(s.gc == 3);
}

TEST_CASE("fire rejects invalid choices") {
  timed_petri_net net = load("delayed_echo.tpn");
  net_state s = initial_state(net);
  firing_choice not_max{{{0, 1}}};
  CHECK_THROWS_AS(fire(net, s, not_max), not_maximal);
  firing_choice too_many{{{1, 9}}};
  CHECK_THROWS_AS(fire(net, s, too_many), not_enabled);
}

TEST_CASE("dead marking admits exactly the empty step") {
  timed_petri_net net = parse_petri(
      "petri { place p; transition t loc=1 @0; arc p -2-> t; arc t -1-> p; marking p=1; }");
  auto choices = enumerate_max_enabled(net, initial_state(net));
  REQUIRE(choices.size() == 1);
  CHECK(choices[0].empty());
}

TEST_CASE("net run policies and graphs") {
  timed_petri_net net = load("branching.tpn");

  pn_trace first = run_trace(net, 1, run_policy::first());
  CHECK(to_string(net, first.choices[0]) == "{tr_a + tr_b}");

  pn_trace s1 = run_trace(net, 3, run_policy::seeded(11));
  pn_trace s2 = run_trace(net, 3, run_policy::seeded(11));
  CHECK(s1.states.back() == s2.states.back());

  pn_graph g = run_graph(net, 2, 1000);
  CHECK(g.layers[0].size() == 1);
  CHECK(g.layers[1].size() == 2);
  std::size_t leaf = g.layers[2].front();
  net_state replayed = initial_state(net);
  for (const firing_choice& ch : g.path_to(leaf)) replayed = fire(net, replayed, ch);
  CHECK(replayed == g.states[leaf]);
}
