#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qca/debruijn.hpp"
#include "qca/locality.hpp"
#include "qca/oracle.hpp"
#include "qca/reports.hpp"
#include "qca/rule.hpp"
#include "qca/state.hpp"

namespace {

using namespace qca;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const nlohmann::json& j) { std::cout << dump_deterministic(j); }

int default_oracle_support(const Rule& rule) { return rule.alphabet.size() <= 2 ? 8 : 5; }

int run_analyze(const std::string& rule_path, bool oracle) {
  Rule rule = parse_rule_file(rule_path);
  PropertyReport rep = classify(rule);
  std::optional<bool> agreement;
  if (oracle) {
    auto brute = oracle::brute_injective(rule, default_oracle_support(rule));
    agreement = brute.injective == rep.injective_finite;
  }
  emit(analyze_report(rule, rep, agreement));
  return 0;
}

int run_graph(const std::string& rule_path, const std::string& dot_path) {
  Rule rule = parse_rule_file(rule_path);
  PairGraph graph = build_pair_graph(rule);
  std::ofstream out(dot_path);
  if (!out) fail(Errc::parse_error, "cannot write DOT file: " + dot_path);
  out << export_dot(graph);
  out.close();
  emit(graph_report(rule, graph, dot_path));
  return 0;
}

int run_step(const std::string& rule_path, const std::string& config_literal_text, int steps,
             const std::string& state_path, bool adjoint, int halo) {
  Rule rule = parse_rule_file(rule_path);
  nlohmann::json j;
  j["command"] = "step";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;

  if (!state_path.empty()) {
    Superposition s = state_from_json(read_file(state_path), rule.alphabet);
    if (s.zero()) fail(Errc::zero_vector, "input state is the zero vector");
    j["adjoint"] = adjoint;
    if (adjoint) {
      Superposition out = apply_F_dagger(rule, s, halo);
      if (out.zero()) fail(Errc::zero_vector, "adjoint annihilated the state");
      j["state"] = state_to_json(out, rule.alphabet);
    } else {
      FlaggedState out = apply_F(rule, s);
      j["non_isometric"] = out.non_isometric;
      j["state"] = state_to_json(out.state, rule.alphabet);
    }
    emit(j);
    return 0;
  }

  if (config_literal_text.empty())
    fail(Errc::parse_error, "step needs a config literal or --quantum state file");
  Config c = parse_config_literal(config_literal_text, rule.alphabet);
  nlohmann::json orbit = nlohmann::json::array();
  orbit.push_back(config_literal(c, rule.alphabet));
  for (int i = 0; i < steps; ++i) {
    c = step(rule, c);
    orbit.push_back(config_literal(c, rule.alphabet));
  }
  j["steps"] = steps;
  j["orbit"] = orbit;
  emit(j);
  return 0;
}

int run_locality(const std::string& rule_path, std::vector<int> region_cells,
                 std::vector<int> neighborhood_cells, std::vector<int> window_cells) {
  Rule rule = parse_rule_file(rule_path);
  Region region = Region::of(std::move(region_cells));
  Region neighborhood = Region::of(std::move(neighborhood_cells));
  Region window = window_cells.empty() ? default_locality_window(rule, region, neighborhood)
                                       : Region::of(std::move(window_cells));
  LocalityReport rep = verify_locality(rule, region, neighborhood, window);
  emit(locality_report_json(rule, rep));
  return rep.verdict == Verdict::inconclusive ? 3 : 0;
}

int run_falsify(const std::string& rule_path, int radius) {
  Rule rule = parse_rule_file(rule_path);
  Region neighborhood = interval(-radius, radius);
  FalsifyReport rep = falsify_uniform_locality(rule, neighborhood);
  emit(falsify_report_json(rule, neighborhood, rep));
  return 0;
}

int run_signal(const std::string& rule_path, bool auto_mode, const std::string& x_text,
               const std::string& y_text, std::optional<int> bob, std::vector<int> alice_cells) {
  Rule rule = parse_rule_file(rule_path);
  Config x, y;
  int bob_cell = 0;
  Region alice;
  if (auto_mode) {
    FalsifyReport w = falsify_uniform_locality(rule, interval(-1, 1));
    x = w.x;
    y = w.y;
    bob_cell = w.bob_cell;
    alice = w.a;
  } else {
    if (x_text.empty() || y_text.empty() || !bob || alice_cells.empty())
      fail(Errc::parse_error, "signal needs --auto or all of --x, --y, --bob, --alice");
    x = parse_config_literal(x_text, rule.alphabet);
    y = parse_config_literal(y_text, rule.alphabet);
    bob_cell = *bob;
    alice = Region::of(std::move(alice_cells));
  }
  SignallingReport rep = signalling_experiment(rule, x, y, bob_cell, alice);
  emit(signal_report_json(rule, rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qca: structural decision procedures and linearized evolution for 1-d cellular automata"};
  app.require_subcommand(1);

  std::string rule_path, dot_path, config_text, state_path, x_text, y_text;
  int steps = 1, halo = -1, radius = 1;
  bool oracle = false, adjoint = false, auto_mode = false;
  std::optional<int> bob;
  std::vector<int> region_cells, neighborhood_cells, window_cells, alice_cells;

  auto* analyze = app.add_subcommand("analyze", "classify a rule and its quantization");
  analyze->add_option("rule", rule_path, "rule file (JSON)")->required();
  analyze->add_flag("--oracle", oracle, "cross-check injectivity against brute force");

  auto* graph = app.add_subcommand("graph", "export the pair diagram as DOT");
  graph->add_option("rule", rule_path, "rule file (JSON)")->required();
  graph->add_option("--dot", dot_path, "output DOT path")->required();

  auto* step_cmd = app.add_subcommand("step", "classical orbit or one quantum step");
  step_cmd->add_option("rule", rule_path, "rule file (JSON)")->required();
  step_cmd->add_option("config", config_text, "config literal \"<offset>|<word>\"");
  step_cmd->add_option("--steps", steps, "number of classical steps")->check(CLI::NonNegativeNumber);
  step_cmd->add_option("--quantum", state_path, "state file (JSON) for a quantum step");
  step_cmd->add_flag("--adjoint", adjoint, "apply the adjoint instead");
  step_cmd->add_option("--halo", halo, "preimage halo override for the adjoint");

  auto* locality = app.add_subcommand("locality", "test locality at a region on a finite window");
  locality->add_option("rule", rule_path, "rule file (JSON)")->required();
  locality->add_option("--region", region_cells, "cells of A")->required()->delimiter(',');
  locality->add_option("--neighborhood", neighborhood_cells, "cells of N")->required()->delimiter(',');
  locality->add_option("--window", window_cells, "window cells (default: A+N+N_C widened by 2)")
      ->delimiter(',');

  auto* falsify = app.add_subcommand("falsify", "produce a uniform-locality counterexample");
  falsify->add_option("rule", rule_path, "rule file (JSON)")->required();
  falsify->add_option("--radius", radius, "test neighborhood [-radius, radius]")
      ->check(CLI::NonNegativeNumber);

  auto* signal = app.add_subcommand("signal", "run the two-branch signalling experiment");
  signal->add_option("rule", rule_path, "rule file (JSON)")->required();
  signal->add_flag("--auto", auto_mode, "derive the setup from the falsifier");
  signal->add_option("--x", x_text, "first config literal");
  signal->add_option("--y", y_text, "second config literal");
  signal->add_option("--bob", bob, "Bob's cell");
  signal->add_option("--alice", alice_cells, "Alice's region cells")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze) return run_analyze(rule_path, oracle);
    if (*graph) return run_graph(rule_path, dot_path);
    if (*step_cmd) return run_step(rule_path, config_text, steps, state_path, adjoint, halo);
    if (*locality) return run_locality(rule_path, region_cells, neighborhood_cells, window_cells);
    if (*falsify) return run_falsify(rule_path, radius);
    if (*signal) return run_signal(rule_path, auto_mode, x_text, y_text, bob, alice_cells);
  } catch (const qca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
