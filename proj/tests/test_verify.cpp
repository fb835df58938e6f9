#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tmpn/dsl.hpp"
#include "tmpn/random.hpp"
#include "tmpn/verify.hpp"

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

TEST_CASE("reference enumeration agrees with the optimized one on fixtures") {
  timed_psystem sys = parse_psystem(fixture("branching.tps"));
  configuration c = initial_configuration(sys);
  auto fast = enumerate_maximal(sys, c);
  auto slow = oracle_maximal_psystem(sys, c);
  REQUIRE(fast.size() == 2);
  CHECK(fast == slow);

  timed_petri_net net = parse_petri(fixture("branching.tpn"));
  net_state s = initial_state(net);
  CHECK(enumerate_max_enabled(net, s) == oracle_maximal_petri(net, s));
}

TEST_CASE("reference enumeration agrees on random models and their successors") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    timed_psystem sys = random_psystem(psystem_params{}, seed);
    configuration c = initial_configuration(sys);
    for (int step = 0; step < 3; ++step) {
      auto fast = enumerate_maximal(sys, c);
      try {
        CHECK(fast == oracle_maximal_psystem(sys, c));
        ++checked;
      } catch (const capacity_exceeded&) {
        break;  // grown past what the reference grid can sweep
      }
      c = apply_step(sys, c, fast.front());
    }

    timed_petri_net net = random_petri(petri_params{}, seed);
    net_state s = initial_state(net);
    for (int step = 0; step < 3; ++step) {
      auto fast = enumerate_max_enabled(net, s);
      try {
        CHECK(fast == oracle_maximal_petri(net, s));
        ++checked;
      } catch (const capacity_exceeded&) {
        break;
      }
      s = fire(net, s, fast.front());
    }
  }
  CHECK(checked > 200);  // the cap must not hollow the test out
}

TEST_CASE("the reference enumeration guards its grid size") {
  timed_psystem sys = parse_psystem(
      "psystem { alphabet a; membrane 1 { contents a^2000000;"
      " rule r: a -> (a, here) @0; } }");
  CHECK_THROWS_AS(oracle_maximal_psystem(sys, initial_configuration(sys)),
                  capacity_exceeded);
  // the optimized enumeration handles the same instance: one forced choice
  auto fast = enumerate_maximal(sys, initial_configuration(sys));
  REQUIRE(fast.size() == 1);
  CHECK(fast[0].of(0) == 2000000);
}

TEST_CASE("all three checks pass on the shipped fixtures") {
  timed_psystem echo = parse_psystem(fixture("delayed_echo.tps"));
  timed_psystem branching = parse_psystem(fixture("branching.tps"));
  timed_psystem dead = parse_psystem(fixture("empty.tps"));
  timed_petri_net echo_net = parse_petri(fixture("delayed_echo.tpn"));
  timed_petri_net branching_net = parse_petri(fixture("branching.tpn"));

  for (const timed_psystem* sys : {&echo, &branching, &dead}) {
    verdict v1 = check_psystem_detiming(*sys, 6);
    CHECK(v1.ok);
    CHECK(v1.depth_checked == 6);
    CHECK(v1.witness.is_null());
    verdict v3 = check_step_correspondence(*sys, 6);
    CHECK(v3.ok);
  }
  for (const timed_petri_net* net : {&echo_net, &branching_net}) {
    verdict v2 = check_petri_detiming(*net, 6);
    CHECK(v2.ok);
    CHECK(v2.fail_depth == std::nullopt);
  }
}

TEST_CASE("a broken system detiming is caught and the witness replays") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  psystem_detiming d = detime_psystem(sys);

  // drop the final ticking rule in membrane 1: staged objects never land
  auto& rules = d.system.rules;
  auto it = std::find_if(rules.begin(), rules.end(),
                         [](const rule& r) { return r.name == "tick_a_0_m1"; });
  REQUIRE(it != rules.end());
  rules.erase(it);
  d.system.finalize();

  verdict v = check_psystem_detiming_pair(sys, d.system, d.projection, 6);
  REQUIRE_FALSE(v.ok);
  CHECK(v.fail_depth == 3);
  CHECK(v.property == "psystem-detiming");
  CHECK(replay_psystem_detiming(v, sys, d.system, d.projection));
}

TEST_CASE("a broken net detiming is caught and the witness replays") {
  timed_petri_net net = parse_petri(fixture("delayed_echo.tpn"));
  petri_detiming d = detime_petri(net);

  // a relay that suddenly needs two buffered tokens per firing drops tokens
  std::size_t relay = d.net.transition_id("tr2^1").value();
  REQUIRE(d.net.pre[relay].size() == 1);
  d.net.pre[relay][0].weight = 2;
  d.net.finalize();

  verdict v = check_petri_detiming_pair(net, d.net, d.place_projection, 6);
  REQUIRE_FALSE(v.ok);
  CHECK(v.fail_depth == 3);
  CHECK(replay_petri_detiming(v, net, d.net, d.place_projection));
}

TEST_CASE("a net that drifts out of lockstep is caught: wrong delay") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  psystem_translation t = psystem_to_petri(sys);
  t.net.transitions[t.transition_of_rule[1]].delay = 1;

  verdict v = check_step_correspondence_pair(sys, t, 6);
  REQUIRE_FALSE(v.ok);
  CHECK(v.fail_depth == 1);
  CHECK(v.witness.at("kind") == "state-mismatch");
  CHECK(replay_step_correspondence(v, sys, t));
}

TEST_CASE("a net that drifts out of lockstep is caught: wrong weight") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  psystem_translation t = psystem_to_petri(sys);
  std::size_t tr2 = t.transition_of_rule[1];
  REQUIRE(t.net.pre[tr2].size() == 1);
  t.net.pre[tr2][0].weight = 2;
  t.net.finalize();

  verdict v = check_step_correspondence_pair(sys, t, 6);
  REQUIRE_FALSE(v.ok);
  CHECK(v.fail_depth == 0);
  CHECK(v.witness.at("kind") == "choice-sets-differ");
  CHECK(replay_step_correspondence(v, sys, t));
}

TEST_CASE("replaying an ok verdict is refused") {
  timed_psystem sys = parse_psystem(fixture("empty.tps"));
  verdict v = check_step_correspondence(sys, 2);
  REQUIRE(v.ok);
  CHECK_THROWS_AS(replay(v, sys), validation_error);
}

TEST_CASE("checks surface exhausted budgets instead of truncating") {
  timed_psystem sys = parse_psystem(fixture("branching.tps"));
  CHECK_THROWS_AS(check_psystem_detiming(sys, 4, 2), budget_exceeded);
}

TEST_CASE("verdict-only replay conveniences rebuild the translation") {
  // a correct source never yields a failing verdict, so fabricate one by
  // checking a wrong pair, then replay against the true source translation:
  // the recorded mismatch must NOT reproduce there
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  psystem_translation broken = psystem_to_petri(sys);
  broken.net.transitions[broken.transition_of_rule[1]].delay = 1;
  verdict v = check_step_correspondence_pair(sys, broken, 6);
  REQUIRE_FALSE(v.ok);
  CHECK_FALSE(replay(v, sys));
}
