// Copyright 2026 The graphgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphgame/chain.hpp"
#include "graphgame/errors.hpp"
#include "graphgame/game.hpp"
#include "graphgame/game_io.hpp"
#include "graphgame/graph_io.hpp"
#include "graphgame/parallel.hpp"
#include "graphgame/repeated.hpp"
#include "graphgame/schedule.hpp"
#include "graphgame/simulator.hpp"

namespace graphgame::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string game;
  std::string graph;
  std::string target;
  std::string mixed;
  std::string out;
  std::string schedule = "powergap:1:3";
  std::string init;
  std::string info = "minimal";
  std::string referee;
  std::uint64_t seed = 1;
  std::uint64_t steps = 100000;
  std::uint64_t t_eval = 1000000;
  std::uint64_t time = 1;
  std::uint64_t k = 0;
  std::uint64_t max_iterations = 100000;
  std::size_t replicas = 20;
  double tol = 0.0;
  double epsilon = 0.0;
  bool no_trace = false;
  bool trace = false;
};

// Writes `text` to DIR/name when an output directory was given.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) return;
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / name, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + (fs::path(o.out) / name).string());
  f << text;
}

template <class Writer>
void emit_with(const Options& o, const std::string& name, Writer&& write) {
  if (o.out.empty()) return;
  std::ostringstream s;
  write(s);
  emit(o, name, s.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Schedules for per-coalition chains; "theoretical" uses the largest factor.
Schedule coalition_schedule(const std::string& text, const GGame& game) {
  std::uint64_t n = 1;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    n = std::max<std::uint64_t>(n, game.strategy_count(h));
  }
  return Schedule::parse(text, n);
}

GGame load_game_file(const std::string& path, std::ostream& err) {
  GameDocument doc = load_game(path);
  for (const auto& w : doc.warnings) err << "warning: " << w << '\n';
  return std::move(doc.game);
}

MixedProfile equilibrium_for(const GGame& game, const Options& o) {
  if (!o.mixed.empty()) return mixed_from_json(game, read_json_file(o.mixed));
  MixedSolverOptions solver;
  if (o.tol > 0.0) solver.tol = o.tol;
  solver.max_iterations = o.max_iterations;
  return compute_mixed_equilibrium(game, solver);
}

json expected_payoffs(const GGame& game, const MixedProfile& m) {
  json j = json::object();
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    j[game.structure().name(h)] = expected_payoff(game, m, h);
  }
  return j;
}

NodeId top_state(const Distribution& mu) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    if (mu[i] > mu[best]) best = i;
  }
  return static_cast<NodeId>(best);
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const GGame game = load_game_file(o.game, err);
  const EquilibriumSet eq = pure_c_equilibria(game);
  json profiles = json::array();
  json labels = json::array();
  for (std::size_t f = 0; f < game.profile_count(); ++f) {
    const StrategyProfile s = game.profile(f);
    json entry = {{"profile", game.label(s)}};
    if (auto v = find_violation(game, s)) {
      entry["equilibrium"] = false;
      entry["witness"] = {{"coalition", game.structure().name(v->coalition)},
                          {"neighbor", game.label(v->neighbor)},
                          {"gain", v->gain}};
    } else {
      entry["equilibrium"] = true;
      labels.push_back(game.label(s));
    }
    profiles.push_back(std::move(entry));
  }
  const json report = {{"coalitions", game.structure().names()},
                       {"profile_count", game.profile_count()},
                       {"equilibria", labels},
                       {"profiles", profiles}};
  out << dump(report);
  emit(o, "equilibria.json", dump(report));
  return kOk;
}

int cmd_mixed(const Options& o, std::ostream& out, std::ostream& err) {
  const GGame game = load_game_file(o.game, err);
  const MixedProfile m = equilibrium_for(game, o);
  const double gain = max_deviation_gain(game, m);
  const double tol = o.tol > 0.0 ? o.tol : MixedSolverOptions{}.tol;
  const json report = {{"equilibrium", mixed_to_json(game, m)},
                       {"max_deviation_gain", gain},
                       {"tolerance", tol},
                       {"certified", is_mixed_c_equilibrium(game, m, tol)},
                       {"expected_payoffs", expected_payoffs(game, m)}};
  out << dump(report);
  emit(o, "mixed.json", dump(report));
  return kOk;
}

int cmd_mcmc_build(const Options& o, std::ostream& out, std::ostream&) {
  const Graph g = load_graph(o.graph);
  const Distribution mu = load_target(o.target, g);
  const CaseLabel c = classify_case(g, mu);
  json report = {{"case", std::string(to_string(c))}, {"nodes", g.size()}};
  TransitionKernel kernel;
  switch (c) {
    case CaseLabel::SupportSplit:
      throw SupportSplit(
          "case (iii): the target support spans several connected components, so no chain "
          "consistent with the graph reaches it");
    case CaseLabel::PointMass:
      kernel = constant_kernel(g, static_cast<NodeId>(mu.support().front()));
      break;
    case CaseLabel::SupportConnected: {
      std::vector<NodeId> supp;
      for (std::size_t i : mu.support()) supp.push_back(static_cast<NodeId>(i));
      kernel = build_kernel_on(mu, g, NodeSubset(std::move(supp)));
      break;
    }
    case CaseLabel::SupportInComponent: {
      report["smoothing_threshold"] = smoothing_threshold(mu);
      if (o.k > 0) {
        const SmoothedTarget sm = smooth(mu, static_cast<double>(o.k));
        const NonhomogeneousKernel family(mu, g, Schedule::parse(o.schedule, g.size()));
        kernel = build_kernel_on(sm.smoothed, g, family.component());
        report["k"] = o.k;
      } else {
        const Schedule schedule = Schedule::parse(o.schedule, g.size());
        const NonhomogeneousKernel family(mu, g, schedule);
        const std::uint64_t l = schedule.interval_of(o.time);
        kernel = *family.for_interval(l);
        report["schedule"] = schedule.describe();
        report["time"] = o.time;
        report["interval"] = l;
        report["k"] = schedule.smoothing_level(l);
      }
      report["lemma_bound"] = lemma_bound(kernel.size(), report["k"].get<double>());
      break;
    }
  }
  report["states"] = kernel.labels();
  report["p"] = kernel.p();
  report["dobrushin"] = dobrushin(kernel.matrix());
  if (kernel.size() > 1) {
    report["dobrushin_power"] = dobrushin(matrix_power(kernel.matrix(), kernel.size() - 1));
  }
  report["detailed_balance_residual"] = detailed_balance_residual(kernel);
  out << dump(report);
  emit(o, "kernel.json", dump(report));
  emit_with(o, "kernel.csv", [&](std::ostream& s) { write_kernel_csv(s, kernel); });
  return kOk;
}

int cmd_mcmc_run(const Options& o, std::ostream& out, std::ostream&) {
  const Graph g = load_graph(o.graph);
  const Distribution mu = load_target(o.target, g);
  const CaseLabel c = classify_case(g, mu);
  if (c == CaseLabel::SupportSplit) {
    throw SupportSplit(
        "case (iii): the target support spans several connected components, so no chain "
        "consistent with the graph reaches it");
  }
  const Schedule schedule = Schedule::parse(o.schedule, g.size());
  ChainStepper chain = make_target_chain(mu, g, schedule);
  const NodeId start = o.init.empty() ? top_state(mu) : g.id(o.init);
  if (!chain.is_state(start)) {
    throw InvalidInput("initial state '" + g.label(start) + "' cannot reach the target support");
  }
  const Trace trace = run_chain(chain, Distribution::dirac(g.size(), start), o.steps, o.seed);
  const Distribution emp = empirical_distribution(trace);
  const double tv = tv_distance(emp, mu);
  const double tol = o.tol > 0.0 ? o.tol : 0.05;
  const auto series = tv_series(trace, mu, log_checkpoints(o.steps));

  json report = {{"case", std::string(to_string(c))},
                 {"steps", o.steps},
                 {"seed", o.seed},
                 {"initial_state", g.label(start)},
                 {"initial_state_mass", emp[start]},
                 {"tv_final", tv},
                 {"tolerance", tol},
                 {"converged", tv <= tol}};
  if (c == CaseLabel::SupportInComponent) report["schedule"] = schedule.describe();
  json empirical = json::object();
  for (NodeId v = 0; v < g.size(); ++v) empirical[g.label(v)] = emp[v];
  report["empirical"] = empirical;
  out << dump(report);
  emit(o, "summary.json", dump(report));

  // Kernel in force at the first step.
  const TransitionKernel kernel =
      c == CaseLabel::SupportInComponent
          ? *NonhomogeneousKernel(mu, g, schedule).for_interval(1)
          : (c == CaseLabel::PointMass ? constant_kernel(g, static_cast<NodeId>(mu.support().front()))
                                       : [&] {
                                           std::vector<NodeId> supp;
                                           for (std::size_t i : mu.support()) {
                                             supp.push_back(static_cast<NodeId>(i));
                                           }
                                           return build_kernel_on(mu, g, NodeSubset(supp));
                                         }());
  emit_with(o, "kernel.csv", [&](std::ostream& s) { write_kernel_csv(s, kernel); });
  if (!o.no_trace) {
    const std::vector<Graph> graphs{g};
    const std::vector<std::string> names{"state"};
    emit_with(o, "trace.csv", [&](std::ostream& s) { write_trace_csv(s, trace, graphs, names); });
  }
  emit_with(o, "empirical.csv", [&](std::ostream& s) { write_empirical_csv(s, trace, g); });
  emit_with(o, "tv.csv", [&](std::ostream& s) {
    s << "step,tv\n" << std::setprecision(17);
    for (const auto& [step, d] : series) s << step << ',' << d << '\n';
  });
  return kOk;
}

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
  const GGame game = load_game_file(o.game, err);
  const Decomposition d = require_decomposition(game);
  json factors = json::object();
  for (std::size_t h = 0; h < d.factors.size(); ++h) {
    factors[game.structure().name(h)] = graph_to_json(d.factors[h]);
  }
  const json report = {{"decomposable", true}, {"factors", factors}};
  out << dump(report);
  emit(o, "decomposition.json", dump(report));
  return kOk;
}

int cmd_repeated(const Options& o, std::ostream& out, std::ostream& err) {
  const GGame game = load_game_file(o.game, err);
  const Decomposition d = require_decomposition(game);
  const MixedProfile m = equilibrium_for(game, o);
  EquilibriumPolicyOptions chain;
  chain.schedule = coalition_schedule(o.schedule, game);
  if (o.epsilon > 0.0) chain.epsilon = o.epsilon;
  const Information info = o.info == "maximal" ? Information::Maximal : Information::Minimal;
  const Initialization init = o.referee.empty()
                                  ? Initialization::players()
                                  : Initialization::referee(game.parse_profile(o.referee));
  const RepeatedConfig config =
      make_repeated_config(game, Horizon::evaluated(o.t_eval), info, init,
                           equilibrium_policies(game, d, m, chain));
  std::vector<PayoffReport> runs(o.replicas);
  parallel_for(o.replicas, [&](std::size_t i) {
    runs[i] = play_repeated(config, derive_seed(o.seed, i));
  });
  json report = repeated_report_json(game, runs);
  report["equilibrium"] = mixed_to_json(game, m);
  report["expected_payoffs"] = expected_payoffs(game, m);
  report["seed"] = o.seed;
  report["information"] = o.info;
  out << dump(report);
  emit(o, "repeated.json", dump(report));
  if (o.trace && !o.out.empty()) {
    const auto [trace, unused] = simulate_repeated(config, derive_seed(o.seed, 0));
    std::vector<Graph> graphs = d.factors;
    emit_with(o, "trace.csv", [&](std::ostream& s) {
      write_trace_csv(s, trace, graphs, game.structure().names());
    });
  }
  return kOk;
}

int cmd_folk_check(const Options& o, std::ostream& out, std::ostream& err) {
  const GGame game = load_game_file(o.game, err);
  require_decomposition(game);
  FolkCheckOptions f;
  f.t_eval = o.t_eval;
  f.replicas = o.replicas;
  f.seed = o.seed;
  if (o.tol > 0.0) f.payoff_tolerance = o.tol;
  f.chain.schedule = coalition_schedule(o.schedule, game);
  f.solver.max_iterations = o.max_iterations;
  if (!o.mixed.empty()) f.equilibrium = mixed_from_json(game, read_json_file(o.mixed));
  const FolkCheckReport rep = folk_check(game, f);
  json report = folk_report_json(game, rep);
  report["t_eval"] = o.t_eval;
  report["replicas"] = o.replicas;
  report["seed"] = o.seed;
  out << dump(report);
  emit(o, "folk.json", dump(report));
  return rep.pass ? kOk : kCheckFailed;
}

}  // namespace

Distribution load_target(const fs::path& path, const Graph& g) {
  const json doc = read_json_file(path);
  const json& t = doc.is_object() && doc.contains("target") ? doc.at("target") : doc;
  std::vector<double> masses(g.size(), 0.0);
  if (t.is_array()) {
    if (t.size() != g.size()) {
      throw InvalidInput("target: has " + std::to_string(t.size()) + " entries, graph has " +
                         std::to_string(g.size()) + " nodes");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t[i].is_number()) throw InvalidInput("target[" + std::to_string(i) + "]: expected a number");
      masses[i] = t[i].get<double>();
    }
  } else if (t.is_object()) {
    for (const auto& [label, value] : t.items()) {
      if (!value.is_number()) throw InvalidInput("target." + label + ": expected a number");
      masses[g.id(label)] = value.get<double>();
    }
  } else {
    throw InvalidInput("target: expected an array or an object keyed by node label");
  }
  return Distribution(std::move(masses));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-constrained games, equilibria and Markov chains", "graphgame"};
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Master seed"); };
  auto add_schedule = [&](CLI::App* c) {
    c->add_option("--schedule", o.schedule,
                  "theoretical | powergap:c:e | counterexample | explicit:t1,t2,..");
  };

  auto* analyze = app.add_subcommand("analyze", "List pure C-equilibria with violation witnesses");
  analyze->add_option("game", o.game)->required()->check(CLI::ExistingFile);
  add_out(analyze);

  auto* mixed = app.add_subcommand("mixed", "Compute a mixed C-equilibrium");
  mixed->add_option("game", o.game)->required()->check(CLI::ExistingFile);
  mixed->add_option("--tol", o.tol, "Certification tolerance")->check(CLI::PositiveNumber);
  mixed->add_option("--max-iter", o.max_iterations)->check(CLI::PositiveNumber);
  add_out(mixed);

  auto* build = app.add_subcommand("mcmc-build", "Build the transition kernel for a target");
  build->add_option("graph", o.graph)->required()->check(CLI::ExistingFile);
  build->add_option("target", o.target)->required()->check(CLI::ExistingFile);
  build->add_option("--time", o.time, "Time for nonhomogeneous kernels")->check(CLI::PositiveNumber);
  build->add_option("--k", o.k, "Fixed smoothing level")->check(CLI::PositiveNumber);
  add_schedule(build);
  add_out(build);

  auto* runc = app.add_subcommand("mcmc-run", "Simulate the chain and write plot data");
  runc->add_option("graph", o.graph)->required()->check(CLI::ExistingFile);
  runc->add_option("target", o.target)->required()->check(CLI::ExistingFile);
  runc->add_option("--steps", o.steps, "Trace length")->check(CLI::PositiveNumber);
  runc->add_option("--init", o.init, "Initial node label (default: largest target mass)");
  runc->add_option("--tol", o.tol, "Convergence tolerance on the final TV")
      ->check(CLI::PositiveNumber);
  runc->add_flag("--no-trace", o.no_trace, "Skip trace.csv");
  add_schedule(runc);
  add_seed(runc);
  add_out(runc);

  auto* decompose = app.add_subcommand("decompose", "Factor the game graph per coalition");
  decompose->add_option("game", o.game)->required()->check(CLI::ExistingFile);
  add_out(decompose);

  auto* repeated = app.add_subcommand("repeated", "Play the repeated game with equilibrium chains");
  repeated->add_option("game", o.game)->required()->check(CLI::ExistingFile);
  repeated->add_option("--t-eval,--steps", o.t_eval, "Stages per replica")
      ->check(CLI::PositiveNumber);
  repeated->add_option("--replicas", o.replicas)->check(CLI::PositiveNumber);
  repeated->add_option("--mixed", o.mixed, "Mixed equilibrium JSON")->check(CLI::ExistingFile);
  repeated->add_option("--info", o.info)->check(CLI::IsMember({"minimal", "maximal"}));
  repeated->add_option("--referee", o.referee, "Initial profile assigned by a referee");
  repeated->add_option("--epsilon", o.epsilon, "Smoothed homogeneous chains within this TV")
      ->check(CLI::Range(0.0, 1.0));
  repeated->add_flag("--trace", o.trace, "Write the first replica's trace");
  add_schedule(repeated);
  add_seed(repeated);
  add_out(repeated);

  auto* folk = app.add_subcommand("folk-check", "Payoff-match and deviation tests");
  folk->add_option("game", o.game)->required()->check(CLI::ExistingFile);
  folk->add_option("--t-eval", o.t_eval)->check(CLI::PositiveNumber);
  folk->add_option("--replicas", o.replicas)->check(CLI::Range(2, 1000000));
  folk->add_option("--mixed", o.mixed, "Mixed equilibrium JSON")->check(CLI::ExistingFile);
  folk->add_option("--tol", o.tol, "Payoff tolerance as a fraction of the payoff range")
      ->check(CLI::PositiveNumber);
  folk->add_option("--max-iter", o.max_iterations)->check(CLI::PositiveNumber);
  add_schedule(folk);
  add_seed(folk);
  add_out(folk);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) return cmd_analyze(o, out, err);
    if (*mixed) return cmd_mixed(o, out, err);
    if (*build) return cmd_mcmc_build(o, out, err);
    if (*runc) return cmd_mcmc_run(o, out, err);
    if (*decompose) return cmd_decompose(o, out, err);
    if (*repeated) return cmd_repeated(o, out, err);
    if (*folk) return cmd_folk_check(o, out, err);
  } catch (const SupportSplit& e) {
    err << "error: " << e.what() << '\n';
    return kSupportSplit;
  } catch (const NotDecomposable& e) {
    err << "error: " << e.what() << '\n';
    return kNotDecomposable;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const ConsistencyViolation& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kInputError;
}

}  // namespace graphgame::cli
