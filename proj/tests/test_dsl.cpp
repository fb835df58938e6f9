#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tmpn/dsl.hpp"
#include "tmpn/random.hpp"
#include "tmpn/translate.hpp"

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

TEST_CASE("parsing the two-membrane example") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  CHECK(sys.alphabet.names() == std::vector<std::string>{"a", "b"});
  REQUIRE(sys.structure.n == 2);
  CHECK(sys.structure.skin == 1);
  CHECK(sys.structure.parent[2] == 1);
  CHECK(to_string(sys.initial[0], sys.alphabet) == "a b");
  CHECK(to_string(sys.initial[1], sys.alphabet) == "a^2 b");
  REQUIRE(sys.rules.size() == 2);
  CHECK(sys.rules[0].name == "r1");
  CHECK(sys.rules[0].delay == 0);
  CHECK(to_string(sys.rules[0].rhs_in.at(2), sys.alphabet) == "b");
  CHECK(sys.rules[1].name == "r2");
  CHECK(sys.rules[1].delay == 2);
  CHECK(to_string(sys.rules[1].rhs_out, sys.alphabet) == "a");
}

TEST_CASE("parsing a net with quoted names") {
  timed_petri_net net = parse_petri(
      "petri { place \"weird \\\"name\\\"\"; transition t loc=3 @1;"
      " arc \"weird \\\"name\\\"\" -2-> t; marking \"weird \\\"name\\\"\"=4; }");
  REQUIRE(net.place_count() == 1);
  CHECK(net.places[0].name == "weird \"name\"");
  CHECK(net.transitions[0].locality == 3);
  CHECK(net.input_weight(0, 0) == 2);
  CHECK(net.initial_marking[0] == 4);
  timed_petri_net again = parse_petri(print_petri(net));
  CHECK(again == net);
}

TEST_CASE("kind sniffing") {
  CHECK(sniff_kind("  # comment\n psystem { ") == model_kind::psystem);
  CHECK(sniff_kind("petri {}") == model_kind::petri);
  CHECK_THROWS_AS(sniff_kind("digraph {}"), parse_error);
}

TEST_CASE("print then parse is the identity on every fixture") {
  for (const char* name :
       {"delayed_echo.tps", "branching.tps", "empty.tps", "delayed_echo_untimed.tps"}) {
    timed_psystem sys = parse_psystem(fixture(name));
    CHECK(parse_psystem(print_psystem(sys)) == sys);
  }
  for (const char* name : {"delayed_echo.tpn", "branching.tpn", "delayed_echo_untimed.tpn"}) {
    timed_petri_net net = parse_petri(fixture(name));
    CHECK(parse_petri(print_petri(net)) == net);
  }
}

TEST_CASE("the shipped fixtures are already canonically formatted") {
  for (const char* name : {"delayed_echo.tps", "delayed_echo_untimed.tps"})
    CHECK(print_psystem(parse_psystem(fixture(name))) == fixture(name));
  for (const char* name : {"delayed_echo.tpn", "delayed_echo_untimed.tpn"})
    CHECK(print_petri(parse_petri(fixture(name))) == fixture(name));
}

TEST_CASE("print then parse is the identity on random and translated models") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    timed_psystem sys = random_psystem(psystem_params{}, seed);
    CHECK(parse_psystem(print_psystem(sys)) == sys);

    psystem_detiming d = detime_psystem(sys);
    CHECK(parse_psystem(print_psystem(d.system)) == d.system);

    psystem_translation t = psystem_to_petri(sys);
    CHECK(parse_petri(print_petri(t.net)) == t.net);

    timed_petri_net net = random_petri(petri_params{}, seed);
    CHECK(parse_petri(print_petri(net)) == net);

    petri_detiming pd = detime_petri(net);
    CHECK(parse_petri(print_petri(pd.net)) == pd.net);
  }
}

TEST_CASE("parse errors carry positions and expectations") {
  try {
    parse_psystem("psystem { alphabet a\n membrane 1 { } }");
    FAIL("expected a parse_error");
  } catch (const parse_error& e) {
    CHECK(e.span.line == 2);
    REQUIRE_FALSE(e.expected.empty());
    CHECK(e.expected[0] == "';'");
    CHECK(std::string(e.what()).find("2:") == 0);
  }
}

TEST_CASE("malformed inputs are rejected with typed errors") {
  // stray token kinds
  CHECK_THROWS_AS(parse_psystem(""), parse_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a; membrane 1 {"), parse_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a; membrane 1 { } } trailing"),
                  parse_error);
  CHECK_THROWS_AS(parse_petri("petri { place p $ }"), parse_error);
  CHECK_THROWS_AS(parse_petri("petri { place \"open"), parse_error);
  CHECK_THROWS_AS(parse_petri("petri { place \"bad\\escape\"; }"), parse_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a^99999999999999999999; membrane 1 {} }"),
                  parse_error);

  // structurally wrong models
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a eps; membrane 1 { } }"),
                  validation_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a a; membrane 1 { } }"), validation_error);
  CHECK_THROWS_AS(
      parse_psystem("psystem { alphabet a; membrane 1 { contents b; } }"), validation_error);
  CHECK_THROWS_AS(
      parse_psystem("psystem { alphabet a; membrane 1 { contents a; contents a; } }"),
      validation_error);
  CHECK_THROWS_AS(
      parse_psystem("psystem { alphabet a; membrane 1 { rule r: a -> (a, in 7) @0; } }"),
      validation_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a; membrane 1 { membrane 1 { } } }"),
                  validation_error);
  CHECK_THROWS_AS(parse_psystem("psystem { alphabet a; membrane 2 { } }"), validation_error);
  CHECK_THROWS_AS(
      parse_psystem("psystem { alphabet a; membrane 1 { rule r: eps -> (a, here); } }"),
      validation_error);
  CHECK_THROWS_AS(
      parse_psystem(
          "psystem { alphabet a; membrane 1 { rule r: a -> (a, here) @2000000000; } }"),
      parse_error);

  CHECK_THROWS_AS(parse_petri("petri { place p; place p; }"), validation_error);
  CHECK_THROWS_AS(parse_petri("petri { place p; arc p -1-> t; }"), validation_error);
  CHECK_THROWS_AS(parse_petri("petri { place p; place q; arc p -1-> q; }"), validation_error);
  CHECK_THROWS_AS(parse_petri("petri { place p; marking p=1, p=2; }"), validation_error);
  CHECK_THROWS_AS(parse_petri("petri { transition t loc=1 @0; }"), validation_error);
  CHECK_THROWS_AS(
      parse_petri("petri { place p; transition t loc=1 @0; arc p -0-> t; }"),
      validation_error);
}

TEST_CASE("membrane nesting deeper than the guard is rejected") {
  std::string text = "psystem { alphabet a; ";
  for (int i = 1; i <= 300; ++i) text += "membrane " + std::to_string(i) + " { ";
  for (int i = 0; i < 300; ++i) text += "} ";
  text += "}";
  CHECK_THROWS_AS(parse_psystem(text), validation_error);
}

TEST_CASE("mutating a model changes its canonical text") {
  timed_psystem sys = parse_psystem(fixture("delayed_echo.tps"));
  std::string before = print_psystem(sys);
  sys.rules[0].delay = 1;
  CHECK(print_psystem(sys) != before);
}
