#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct cli_result {
  int code = -1;
  std::string out;
};

// stdout only; stderr (the wall-clock report) is dropped
cli_result run_cli(const std::string& args) {
  std::string cmd = std::string(TMPN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  cli_result r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const char* name) { return std::string(TMPN_MODELS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("run prints the exact trace of the two-membrane example") {
  cli_result r = run_cli("run " + model("delayed_echo.tps") + " --steps 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("0: (a b, a^2 b, 0)\n"
                   "   {r1 + 2 r2}\n"
                   "1: (a, b^2, 1)\n"
                   "   {}\n"
                   "2: (a, b^2, 2)\n"
                   "   {}\n"
                   "3: (a^3, b^2, 3)\n") != std::string::npos);

  // byte-identical across invocations: timing never leaks into stdout
  cli_result again = run_cli("run " + model("delayed_echo.tps") + " --steps 3");
  CHECK(again.out == r.out);
}

TEST_CASE("run emits machine-readable traces") {
  cli_result r = run_cli("run " + model("delayed_echo.tpn") + " --steps 3 --format json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["states"].size() == 4);
  CHECK(j["choices"][0]["tr2"] == 2);
  CHECK(j["states"][3]["marking"]["(a,1)"] == 3);
  CHECK(j["states"][3]["gc"] == 3);
  CHECK(j["model_hash"].is_string());
}

TEST_CASE("run policies") {
  cli_result seeded =
      run_cli("run " + model("branching.tps") + " --steps 2 --policy seeded --seed 5");
  CHECK(seeded.code == 0);
  cli_result again =
      run_cli("run " + model("branching.tps") + " --steps 2 --policy seeded --seed 5");
  CHECK(again.out == seeded.out);

  cli_result missing_seed = run_cli("run " + model("branching.tps") + " --policy seeded");
  CHECK(missing_seed.code == 2);
}

TEST_CASE("translate reproduces the frozen expansions") {
  cli_result ps = run_cli("translate " + model("delayed_echo.tps") + " --to ps");
  CHECK(ps.code == 0);
  CHECK(ps.out == slurp(model("delayed_echo_untimed.tps")));

  cli_result pn = run_cli("translate " + model("delayed_echo.tpn") + " --to pn");
  CHECK(pn.code == 0);
  CHECK(pn.out == slurp(model("delayed_echo_untimed.tpn")));

  cli_result tpn = run_cli("translate " + model("delayed_echo.tps") + " --to tpn");
  CHECK(tpn.code == 0);
  CHECK(tpn.out.find("transition \"tr^{r2}_2\" loc=2 @2;") != std::string::npos);

  cli_result wrong = run_cli("translate " + model("delayed_echo.tpn") + " --to tpn");
  CHECK(wrong.code == 2);
}

TEST_CASE("translate writes correspondence maps on request") {
  std::string out = "/tmp/tmpn_test_translated.tpn";
  std::string map = "/tmp/tmpn_test_map.json";
  cli_result r = run_cli("translate " + model("delayed_echo.tps") + " --to tpn -o " + out +
                         " --map " + map);
  CHECK(r.code == 0);
  json m = json::parse(slurp(map));
  CHECK(m["type"] == "step-correspondence");
  CHECK(m["places"]["(a,2)"]["membrane"] == 2);
  std::remove(out.c_str());
  std::remove(map.c_str());
}

TEST_CASE("verify reports verdicts and exit codes") {
  cli_result ok = run_cli("verify " + model("delayed_echo.tps") + " --prop 3 --depth 5");
  CHECK(ok.code == 0);
  json v = json::parse(ok.out);
  CHECK(v["ok"] == true);
  CHECK(v["depth_checked"] == 5);

  cli_result wrong_kind = run_cli("verify " + model("delayed_echo.tps") + " --prop 2");
  CHECK(wrong_kind.code == 2);

  cli_result starved = run_cli("verify " + model("branching.tps") + " --prop 1 --budget 2");
  CHECK(starved.code == 3);

  cli_result sweep = run_cli("verify --prop 1 --random 5 --seed 1 --depth 4");
  CHECK(sweep.code == 0);
  CHECK(sweep.out.find("all ok") != std::string::npos);
}

TEST_CASE("export produces dot for nets and json for everything") {
  cli_result dot = run_cli("export " + model("branching.tpn") + " --dot");
  CHECK(dot.code == 0);
  CHECK(dot.out.find("digraph net {") == 0);

  cli_result nodot = run_cli("export " + model("branching.tps") + " --dot");
  CHECK(nodot.code == 2);

  cli_result js = run_cli("export " + model("branching.tps") + " --json");
  CHECK(js.code == 0);
  json j = json::parse(js.out);
  CHECK(j["kind"] == "psystem");
  CHECK(j["rules"].size() == 2);

  cli_result both = run_cli("export " + model("branching.tps") + " --dot --json");
  CHECK(both.code == 2);
}

TEST_CASE("fmt canonicalizes and is idempotent") {
  cli_result once = run_cli("fmt " + model("branching.tps"));
  REQUIRE(once.code == 0);
  std::string tmp = "/tmp/tmpn_test_fmt.tps";
  std::ofstream(tmp) << once.out;
  cli_result twice = run_cli("fmt " + tmp);
  CHECK(twice.out == once.out);
  std::remove(tmp.c_str());
}

TEST_CASE("input failures exit with the input error code") {
  CHECK(run_cli("run /nonexistent.tps").code == 2);
  std::string tmp = "/tmp/tmpn_test_garbage.tps";
  std::ofstream(tmp) << "psystem { alphabet ; }";
  CHECK(run_cli("run " + tmp).code == 2);
  std::remove(tmp.c_str());
  CHECK(run_cli("bogus-subcommand").code == 2);
}
