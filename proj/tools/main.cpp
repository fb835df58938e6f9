#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "tmpn/dot.hpp"
#include "tmpn/dsl.hpp"
#include "tmpn/json_io.hpp"
#include "tmpn/random.hpp"
#include "tmpn/verify.hpp"

namespace {

using namespace tmpn;

// 0 success, 1 a checked property is violated, 2 bad input, 3 budget exhausted
constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_input = 2;
constexpr int exit_budget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot write " + path);
  out << text;
}

// FNV-1a over the canonical text, so equal models hash equally regardless of
// the formatting they were loaded from
std::string model_hash(const parsed_model& m) {
  std::string text = print_model(m);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << h;
  return out.str();
}

run_policy make_policy(const std::string& name, std::uint64_t seed, bool seed_given) {
  if (name == "first") return run_policy::first();
  if (name == "seeded") {
    if (!seed_given) throw error("--policy seeded requires --seed");
    return run_policy::seeded(seed);
  }
  throw error("unknown policy '" + name + "' (expected first or seeded)");
}

struct run_options {
  std::string file;
  int steps = 10;
  std::string format = "text";
  std::string policy = "first";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int cmd_run(const run_options& opt) {
  parsed_model model = parse_model(read_file(opt.file));
  run_policy policy = make_policy(opt.policy, opt.seed, opt.seed_given);
  std::string hash = model_hash(model);

  if (std::holds_alternative<timed_psystem>(model)) {
    const auto& sys = std::get<timed_psystem>(model);
    p_trace trace = run_trace(sys, opt.steps, policy);
    if (opt.format == "json") {
      nlohmann::json j = {{"model_hash", hash}, {"states", nlohmann::json::array()},
                          {"choices", nlohmann::json::array()}};
      for (const auto& c : trace.states) j["states"].push_back(to_json(sys, c));
      for (const auto& ch : trace.choices) j["choices"].push_back(to_json(sys, ch));
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "model " << hash << '\n';
      for (std::size_t i = 0; i < trace.states.size(); ++i) {
        std::cout << i << ": " << to_string(sys, trace.states[i]) << '\n';
        if (i < trace.choices.size())
          std::cout << "   " << to_string(sys, trace.choices[i]) << '\n';
      }
    }
  } else {
    const auto& net = std::get<timed_petri_net>(model);
    pn_trace trace = run_trace(net, opt.steps, policy);
    if (opt.format == "json") {
      nlohmann::json j = {{"model_hash", hash}, {"states", nlohmann::json::array()},
                          {"choices", nlohmann::json::array()}};
      for (const auto& s : trace.states) j["states"].push_back(to_json(net, s));
      for (const auto& ch : trace.choices) j["choices"].push_back(to_json(net, ch));
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "model " << hash << '\n';
      for (std::size_t i = 0; i < trace.states.size(); ++i) {
        std::cout << i << ": " << to_string(net, trace.states[i]) << '\n';
        if (i < trace.choices.size())
          std::cout << "   " << to_string(net, trace.choices[i]) << '\n';
      }
    }
  }
  return exit_ok;
}

struct translate_options {
  std::string file;
  std::string to;
  std::string out;
  std::string map;
};

int cmd_translate(const translate_options& opt) {
  parsed_model model = parse_model(read_file(opt.file));

  if (opt.to == "ps") {
    if (!std::holds_alternative<timed_psystem>(model))
      throw error("--to ps removes delays from a membrane system; input is a net");
    const auto& sys = std::get<timed_psystem>(model);
    psystem_detiming d = detime_psystem(sys);
    write_output(opt.out, print_psystem(d.system));
    if (!opt.map.empty()) write_output(opt.map, map_to_json(d, sys).dump(2) + "\n");
  } else if (opt.to == "pn") {
    if (!std::holds_alternative<timed_petri_net>(model))
      throw error("--to pn removes delays from a net; input is a membrane system");
    const auto& net = std::get<timed_petri_net>(model);
    petri_detiming d = detime_petri(net);
    write_output(opt.out, print_petri(d.net));
    if (!opt.map.empty()) write_output(opt.map, map_to_json(d, net).dump(2) + "\n");
  } else if (opt.to == "tpn") {
    if (!std::holds_alternative<timed_psystem>(model))
      throw error("--to tpn encodes a membrane system as a net; input is already a net");
    const auto& sys = std::get<timed_psystem>(model);
    psystem_translation t = psystem_to_petri(sys);
    write_output(opt.out, print_petri(t.net));
    if (!opt.map.empty()) write_output(opt.map, map_to_json(t, sys).dump(2) + "\n");
  } else {
    throw error("unknown target '" + opt.to + "' (expected ps, pn or tpn)");
  }
  return exit_ok;
}

struct verify_options {
  std::string file;
  int prop = 0;
  int depth = 5;
  std::size_t budget = default_state_budget;
  int random_count = 0;
  std::uint64_t seed = 1;
};

verdict check_one(int prop, const parsed_model& model, int depth, std::size_t budget) {
  switch (prop) {
    case 1:
      if (!std::holds_alternative<timed_psystem>(model))
        throw error("--prop 1 checks a membrane system");
      return check_psystem_detiming(std::get<timed_psystem>(model), depth, budget);
    case 2:
      if (!std::holds_alternative<timed_petri_net>(model))
        throw error("--prop 2 checks a net");
      return check_petri_detiming(std::get<timed_petri_net>(model), depth, budget);
    case 3:
      if (!std::holds_alternative<timed_psystem>(model))
        throw error("--prop 3 checks a membrane system");
      return check_step_correspondence(std::get<timed_psystem>(model), depth, budget);
    default:
      throw error("--prop must be 1, 2 or 3");
  }
}

int cmd_verify(const verify_options& opt) {
  if (opt.random_count > 0) {
    int failures = 0;
    for (int i = 0; i < opt.random_count; ++i) {
      std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
      parsed_model model;
      if (opt.prop == 2)
        model = random_petri(petri_params{}, seed);
      else
        model = random_psystem(psystem_params{}, seed);
      verdict v = check_one(opt.prop, model, opt.depth, opt.budget);
      if (v.ok) {
        std::cout << "model " << i << " seed=" << seed << " ok depth=" << v.depth_checked
                  << '\n';
      } else {
        ++failures;
        std::cout << "model " << i << " seed=" << seed << " FAIL " << v.detail << '\n';
      }
    }
    std::cout << (failures == 0 ? "all ok" : std::to_string(failures) + " failed") << '\n';
    return failures == 0 ? exit_ok : exit_violation;
  }

  if (opt.file.empty()) throw error("verify needs a model file or --random N");
  parsed_model model = parse_model(read_file(opt.file));
  verdict v = check_one(opt.prop, model, opt.depth, opt.budget);
  std::cout << to_json(v).dump(2) << '\n';
  return v.ok ? exit_ok : exit_violation;
}

struct export_options {
  std::string file;
  std::string out;
  bool dot = false;
  bool json = false;
};

int cmd_export(const export_options& opt) {
  parsed_model model = parse_model(read_file(opt.file));
  if (opt.dot == opt.json) throw error("export needs exactly one of --dot or --json");
  if (opt.dot) {
    if (!std::holds_alternative<timed_petri_net>(model))
      throw error("--dot renders nets; use translate --to tpn first");
    write_output(opt.out, to_dot(std::get<timed_petri_net>(model)));
  } else {
    nlohmann::json j = std::holds_alternative<timed_psystem>(model)
                           ? to_json(std::get<timed_psystem>(model))
                           : to_json(std::get<timed_petri_net>(model));
    write_output(opt.out, j.dump(2) + "\n");
  }
  return exit_ok;
}

int cmd_fmt(const std::string& file, const std::string& out) {
  write_output(out, print_model(parse_model(read_file(file))));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulate, translate and check timed membrane systems and nets"};
  app.require_subcommand(1);

  run_options ro;
  auto* run = app.add_subcommand("run", "execute a bounded trace");
  run->add_option("file", ro.file, "model file")->required();
  run->add_option("--steps", ro.steps, "steps to execute")->check(CLI::NonNegativeNumber);
  run->add_option("--format", ro.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run->add_option("--policy", ro.policy, "first or seeded");
  auto* run_seed = run->add_option("--seed", ro.seed, "seed for --policy seeded");

  translate_options to;
  auto* translate = app.add_subcommand("translate", "construct an equivalent model");
  translate->add_option("file", to.file, "model file")->required();
  translate->add_option("--to", to.to, "ps (drop delays), pn (drop delays), tpn (to a net)")
      ->required();
  translate->add_option("-o,--out", to.out, "output file (stdout by default)");
  translate->add_option("--map", to.map, "write the correspondence map here");

  verify_options vo;
  auto* verify = app.add_subcommand("verify", "check a translation against its source");
  verify->add_option("file", vo.file, "model file");
  verify->add_option("--prop", vo.prop, "1 system detiming, 2 net detiming, 3 net encoding")
      ->required();
  verify->add_option("--depth", vo.depth, "exploration depth")->check(CLI::NonNegativeNumber);
  verify->add_option("--budget", vo.budget, "state budget");
  verify->add_option("--random", vo.random_count, "check this many generated models instead");
  verify->add_option("--seed", vo.seed, "first seed for --random");

  export_options eo;
  auto* exp = app.add_subcommand("export", "emit graphviz or json");
  exp->add_option("file", eo.file, "model file")->required();
  exp->add_flag("--dot", eo.dot, "graphviz (nets only)");
  exp->add_flag("--json", eo.json, "json");
  exp->add_option("-o,--out", eo.out, "output file (stdout by default)");

  std::string fmt_file, fmt_out;
  auto* fmt = app.add_subcommand("fmt", "reprint a model canonically");
  fmt->add_option("file", fmt_file, "model file")->required();
  fmt->add_option("-o,--out", fmt_out, "output file (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_input;
  }
  ro.seed_given = run_seed->count() > 0;

  auto started = std::chrono::steady_clock::now();
  int code = exit_ok;
  try {
    if (run->parsed()) code = cmd_run(ro);
    else if (translate->parsed()) code = cmd_translate(to);
    else if (verify->parsed()) code = cmd_verify(vo);
    else if (exp->parsed()) code = cmd_export(eo);
    else code = cmd_fmt(fmt_file, fmt_out);
  } catch (const budget_exceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = exit_budget;
  } catch (const capacity_exceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = exit_budget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = exit_input;
  }

  auto elapsed = std::chrono::steady_clock::now() - started;
  std::cerr << "wall_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() << '\n';
  return code;
}
