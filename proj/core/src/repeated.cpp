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

#include "graphgame/repeated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "graphgame/chain.hpp"
#include "graphgame/errors.hpp"
#include "graphgame/parallel.hpp"
#include "graphgame/rng.hpp"

namespace graphgame {
namespace {

// Referee draws use a stream no coalition uses.
constexpr std::uint64_t kRefereeStream = std::uint64_t{1} << 32;

struct Summary {
  double mean = 0.0;
  double se = 0.0;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return s;
}

bool same_factors(const Decomposition& a, const Decomposition& b) {
  return a.factors == b.factors && a.joint_by_tuple == b.joint_by_tuple;
}

// Accumulates per-coalition stage payoffs and the tail-window minimum of the
// running averages.
class PayoffAccumulator {
 public:
  PayoffAccumulator(const GGame& game, const Horizon& horizon)
      : game_(game),
        horizon_(horizon),
        window_start_(horizon.infinite ? std::max<std::uint64_t>(1, horizon.length / 2)
                                       : horizon.length),
        sums_(game.coalitions(), 0.0),
        tail_(game.coalitions(), std::numeric_limits<double>::infinity()) {}

  void add(std::size_t flat) {
    ++stages_;
    for (std::size_t h = 0; h < sums_.size(); ++h) {
      sums_[h] += game_.payoff(h, flat);
      if (stages_ >= window_start_) {
        tail_[h] = std::min(tail_[h], sums_[h] / static_cast<double>(stages_));
      }
    }
  }

  std::vector<PayoffEstimate> finish() const {
    std::vector<PayoffEstimate> out(sums_.size());
    for (std::size_t h = 0; h < sums_.size(); ++h) {
      out[h].average = sums_[h] / static_cast<double>(stages_);
      out[h].tail_liminf = horizon_.infinite ? tail_[h] : out[h].average;
    }
    return out;
  }

 private:
  const GGame& game_;
  Horizon horizon_;
  std::uint64_t window_start_;
  std::uint64_t stages_ = 0;
  std::vector<double> sums_;
  std::vector<double> tail_;
};

// Shared engine for simulate_repeated and play_repeated.
PayoffReport run(const RepeatedConfig& config, std::uint64_t seed, Trace* trace) {
  validate(config);
  const GGame& game = config.game;
  const std::size_t r = game.coalitions();
  const auto& factors = config.decomposition.factors;

  std::vector<std::unique_ptr<Policy>> players;
  std::vector<Rng> rngs;
  players.reserve(r);
  rngs.reserve(r);
  for (std::size_t h = 0; h < r; ++h) {
    players.push_back(config.policies[h]->clone());
    rngs.emplace_back(seed, h);
  }

  StrategyProfile s;
  s.choices.resize(r);
  const Initialization& init = config.init;
  if (init.kind == Initialization::Kind::Players) {
    for (std::size_t h = 0; h < r; ++h) s[h] = players[h]->initial(rngs[h]);
  } else if (init.profile) {
    s = *init.profile;
  } else {
    Rng referee(seed, kRefereeStream);
    for (std::size_t h = 0; h < r; ++h) s[h] = referee.categorical(init.distributions->parts[h].masses());
  }
  for (std::size_t h = 0; h < r; ++h) {
    if (s[h] >= game.strategy_count(h)) {
      throw ConsistencyViolation("coalition " + game.structure().name(h) +
                                 " chose an unknown initial strategy");
    }
    players[h]->start(s[h]);
  }

  const bool maximal = config.info == Information::Maximal;
  std::vector<bool> own_history(r, false);
  bool joint_history = false;
  for (std::size_t h = 0; h < r; ++h) {
    own_history[h] = players[h]->needs_history();
    joint_history = joint_history || (maximal && own_history[h]);
  }
  std::vector<std::vector<std::size_t>> own(r);
  std::vector<std::size_t> joint;

  const std::uint64_t stages = config.horizon.length;
  PayoffAccumulator acc(game, config.horizon);
  if (trace != nullptr) {
    trace->seed = seed;
    trace->states.clear();
    trace->states.reserve(stages);
    trace->counts.assign(game.profile_count(), 0);
    trace->components.assign(r, {});
    for (auto& c : trace->components) c.reserve(stages);
  }

  StrategyProfile next = s;
  for (std::uint64_t t = 0;; ++t) {
    const std::size_t flat = game.flat(s);
    acc.add(flat);
    if (trace != nullptr) {
      trace->states.push_back(static_cast<std::uint32_t>(flat));
      ++trace->counts[flat];
      for (std::size_t h = 0; h < r; ++h) {
        trace->components[h].push_back(static_cast<std::uint32_t>(s[h]));
      }
    }
    if (t + 1 >= stages) break;

    if (joint_history) joint.push_back(flat);
    for (std::size_t h = 0; h < r; ++h) {
      if (own_history[h]) own[h].push_back(s[h]);
      PolicyContext ctx;
      ctx.t = t;
      ctx.coalition = h;
      ctx.current = s[h];
      if (own_history[h]) ctx.own_history = own[h];
      if (maximal && own_history[h]) ctx.joint_history = joint;
      const std::size_t choice = players[h]->next(ctx, rngs[h]);
      if (choice >= factors[h].size() ||
          !factors[h].adjacent(static_cast<NodeId>(s[h]), static_cast<NodeId>(choice))) {
        throw ConsistencyViolation(
            "coalition " + game.structure().name(h) + " (" + players[h]->name() +
            ") moved from '" + game.strategies(h)[s[h]] + "' to a non-adjacent strategy at stage " +
            std::to_string(t + 1));
      }
      next[h] = choice;
    }
    std::swap(s, next);
  }

  PayoffReport report;
  report.seed = seed;
  report.stages = stages;
  report.coalitions = acc.finish();
  return report;
}

// Final averages of coalition c over `replicas` runs on derived seeds.
std::vector<double> replica_values(const RepeatedConfig& config, std::size_t c,
                                   std::size_t replicas, std::uint64_t seed) {
  std::vector<double> values(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    values[i] = play_repeated(config, derive_seed(seed, i)).coalitions[c].average;
  });
  return values;
}

DeviationReport compare(std::size_t coalition, std::string name, std::uint64_t t_eval,
                        double margin, std::vector<double> eq, std::vector<double> dev) {
  DeviationReport rep;
  rep.coalition = coalition;
  rep.deviation = std::move(name);
  rep.t_eval = t_eval;
  rep.margin = margin;
  std::vector<double> diff(eq.size());
  for (std::size_t i = 0; i < eq.size(); ++i) diff[i] = dev[i] - eq[i];
  const Summary se = summarize(eq);
  const Summary sd = summarize(dev);
  const Summary sdiff = summarize(diff);
  rep.equilibrium_mean = se.mean;
  rep.equilibrium_se = se.se;
  rep.deviation_mean = sd.mean;
  rep.deviation_se = sd.se;
  rep.difference_mean = sdiff.mean;
  rep.difference_se = sdiff.se;
  // The tiny absolute slack absorbs summation-order rounding in exact ties.
  rep.not_improved = sdiff.mean <= margin * sdiff.se + 1e-12;
  rep.equilibrium_values = std::move(eq);
  rep.deviation_values = std::move(dev);
  return rep;
}

double payoff_range(const GGame& game, std::size_t c) {
  const auto tensor = game.payoff_tensor(c);
  const auto [lo, hi] = std::minmax_element(tensor.begin(), tensor.end());
  return *hi - *lo;
}

}  // namespace

Decomposition require_decomposition(const GGame& game) {
  auto d = factorize(game.graph(), game.strategy_spaces());
  if (!d) {
    throw NotDecomposable("the game graph is not a strong product of per-coalition graphs");
  }
  return std::move(*d);
}

void validate(const RepeatedConfig& config) {
  const GGame& game = config.game;
  const std::size_t r = game.coalitions();
  if (!same_factors(config.decomposition, require_decomposition(game))) {
    throw InvalidInput("decomposition does not match the game graph");
  }
  if (config.horizon.length == 0) throw InvalidInput("horizon must be at least one stage");
  if (config.policies.size() != r) {
    throw InvalidInput("expected " + std::to_string(r) + " policies, got " +
                       std::to_string(config.policies.size()));
  }
  for (const auto& p : config.policies) {
    if (!p) throw InvalidInput("missing policy");
  }
  const Initialization& init = config.init;
  if (init.kind == Initialization::Kind::Referee) {
    if (init.profile.has_value() == init.distributions.has_value()) {
      throw InvalidInput("referee initialization needs either a profile or distributions");
    }
    if (init.profile && !game.valid(*init.profile)) {
      throw InvalidInput("referee profile is not a valid strategy profile");
    }
    if (init.distributions) {
      const auto& parts = init.distributions->parts;
      if (parts.size() != r) throw InvalidInput("referee needs one distribution per coalition");
      for (std::size_t h = 0; h < r; ++h) {
        if (parts[h].size() != game.strategy_count(h)) {
          throw InvalidInput("referee distribution for " + game.structure().name(h) +
                             " has the wrong size");
        }
      }
    }
  }
}

RepeatedConfig make_repeated_config(const GGame& game, Horizon horizon, Information info,
                                    Initialization init, std::vector<PolicyPtr> policies) {
  RepeatedConfig config{game,          require_decomposition(game), horizon, info,
                        std::move(init), std::move(policies)};
  validate(config);
  return config;
}

PayoffEstimate repeated_payoff(const Trace& trace, const GGame& game, std::size_t c,
                               const Horizon& horizon) {
  if (horizon.length == 0) throw InvalidInput("horizon must be at least one stage");
  if (trace.length() < horizon.length) {
    throw InvalidInput("trace has " + std::to_string(trace.length()) + " stages, need " +
                       std::to_string(horizon.length));
  }
  if (c >= game.coalitions()) throw InvalidInput("unknown coalition index");
  const std::uint64_t start =
      horizon.infinite ? std::max<std::uint64_t>(1, horizon.length / 2) : horizon.length;
  double sum = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < horizon.length; ++m) {
    sum += game.payoff(c, trace.states[m]);
    if (m + 1 >= start) tail = std::min(tail, sum / static_cast<double>(m + 1));
  }
  PayoffEstimate e;
  e.average = sum / static_cast<double>(horizon.length);
  e.tail_liminf = horizon.infinite ? tail : e.average;
  return e;
}

std::pair<Trace, PayoffReport> simulate_repeated(const RepeatedConfig& config,
                                                 std::uint64_t seed) {
  Trace trace;
  PayoffReport report = run(config, seed, &trace);
  return {std::move(trace), std::move(report)};
}

PayoffReport play_repeated(const RepeatedConfig& config, std::uint64_t seed) {
  return run(config, seed, nullptr);
}

std::vector<PolicyPtr> equilibrium_policies(const GGame& game, const Decomposition& decomposition,
                                            const MixedProfile& mixed,
                                            const EquilibriumPolicyOptions& options) {
  const std::size_t r = game.coalitions();
  if (mixed.size() != r || decomposition.factors.size() != r) {
    throw InvalidInput("mixed profile and decomposition must cover every coalition");
  }
  if (!is_mixed_c_equilibrium(game, mixed, options.tol)) {
    throw InvalidInput("the mixed profile is not a mixed C-equilibrium");
  }
  std::vector<PolicyPtr> out;
  for (std::size_t h = 0; h < r; ++h) {
    const Graph& g = decomposition.factors[h];
    const Distribution& lambda = mixed[h];
    if (!is_connected(g)) {
      throw NotConnected("factor graph of " + game.structure().name(h) + " is not connected");
    }
    const std::string tag = game.structure().name(h);
    switch (classify_case(g, lambda)) {
      case CaseLabel::PointMass: {
        const auto at = static_cast<NodeId>(lambda.support().front());
        auto k = std::make_shared<const TransitionKernel>(constant_kernel(g, at));
        out.push_back(std::make_shared<MarkovPolicy>(tag + ":constant",
                                                     ChainStepper::homogeneous(k), lambda));
        break;
      }
      case CaseLabel::SupportConnected: {
        const auto supp = lambda.support();
        NodeSubset subset(std::vector<NodeId>(supp.begin(), supp.end()));
        auto k = std::make_shared<const TransitionKernel>(build_kernel_on(lambda, g, subset));
        out.push_back(std::make_shared<MarkovPolicy>(tag + ":homogeneous",
                                                     ChainStepper::homogeneous(k), lambda));
        break;
      }
      case CaseLabel::SupportInComponent: {
        if (options.epsilon) {
          if (!(*options.epsilon > 0.0 && *options.epsilon < 1.0)) {
            throw InvalidInput("epsilon must lie in (0, 1)");
          }
          const double k = std::max(std::ceil(1.0 / *options.epsilon),
                                    static_cast<double>(min_valid_k(lambda)));
          const SmoothedTarget sm = smooth(lambda, k);
          auto kernel = std::make_shared<const TransitionKernel>(build_kernel(sm.smoothed, g));
          out.push_back(std::make_shared<MarkovPolicy>(tag + ":smoothed",
                                                       ChainStepper::homogeneous(kernel), lambda));
        } else {
          auto family = std::make_shared<const NonhomogeneousKernel>(lambda, g, options.schedule);
          out.push_back(std::make_shared<MarkovPolicy>(
              tag + ":nonhomogeneous", ChainStepper::nonhomogeneous(family), lambda));
        }
        break;
      }
      case CaseLabel::SupportSplit:
        throw SupportSplit("support of " + tag + " spans several components of its factor graph");
    }
  }
  return out;
}

DeviationReport deviation_test(const RepeatedConfig& config, std::size_t coalition,
                               const PolicyPtr& deviation, std::uint64_t t_eval,
                               std::size_t replicas, std::uint64_t seed, double margin) {
  if (coalition >= config.game.coalitions()) throw InvalidInput("unknown coalition index");
  if (!deviation) throw InvalidInput("missing deviation policy");
  if (replicas == 0) throw InvalidInput("replicas must be positive");
  RepeatedConfig eq = config;
  eq.horizon = Horizon::evaluated(t_eval);
  RepeatedConfig dev = eq;
  dev.policies[coalition] = deviation;
  auto eq_values = replica_values(eq, coalition, replicas, seed);
  auto dev_values = replica_values(dev, coalition, replicas, seed);
  return compare(coalition, deviation->name(), t_eval, margin, std::move(eq_values),
                 std::move(dev_values));
}

std::vector<PolicyPtr> stock_deviations(const GGame& game, const Decomposition& decomposition,
                                        std::size_t coalition, const MixedProfile& belief) {
  const Graph& g = decomposition.factors.at(coalition);
  return {
      std::make_shared<ConstantPolicy>(g, 0),
      std::make_shared<ConstantPolicy>(g, g.size() - 1),
      std::make_shared<LazyRandomWalkPolicy>(g),
      std::make_shared<MyopicGreedyPolicy>(game, coalition, belief, g),
      std::make_shared<RoundRobinPolicy>(g),
  };
}

bool two_stage_check(const GGame& game, const StrategyProfile& sbar) {
  if (!game.valid(sbar)) throw InvalidInput("not a valid strategy profile");
  if (!is_pure_c_equilibrium(game, sbar)) {
    throw InvalidInput("profile " + game.label(sbar) + " is not a pure C-equilibrium");
  }
  const Decomposition d = require_decomposition(game);
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    const double base = game.payoff(h, sbar);
    StrategyProfile t = sbar;
    for (NodeId v : d.factors[h].neighbors(static_cast<NodeId>(sbar[h]))) {
      t[h] = v;
      if (game.payoff(h, t) > base) return false;
    }
  }
  return true;
}

FolkCheckReport folk_check(const GGame& game, const FolkCheckOptions& options) {
  if (options.replicas < 2) throw InvalidInput("folk check needs at least two replicas");
  const Decomposition d = require_decomposition(game);
  FolkCheckReport report;
  report.equilibrium =
      options.equilibrium ? *options.equilibrium : compute_mixed_equilibrium(game, options.solver);
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    report.chain_cases.emplace_back(to_string(classify_case(d.factors[h], report.equilibrium[h])));
  }
  auto policies = equilibrium_policies(game, d, report.equilibrium, options.chain);
  const RepeatedConfig config{game,
                              d,
                              Horizon::evaluated(options.t_eval),
                              Information::Minimal,
                              Initialization::players(),
                              policies};
  validate(config);

  std::vector<PayoffReport> eq_runs(options.replicas);
  parallel_for(options.replicas, [&](std::size_t i) {
    eq_runs[i] = play_repeated(config, derive_seed(options.seed, i));
  });

  report.pass = true;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    CoalitionFolkResult res;
    res.name = game.structure().name(h);
    res.expected = expected_payoff(game, report.equilibrium, h);
    res.payoff_range = payoff_range(game, h);
    const double tol = std::max(options.payoff_tolerance * res.payoff_range, 1e-9);
    std::vector<double> eq_values;
    for (const auto& run : eq_runs) {
      res.replicas.push_back(run.coalitions[h]);
      eq_values.push_back(run.coalitions[h].average);
      res.max_error = std::max(res.max_error, std::abs(run.coalitions[h].average - res.expected));
    }
    res.payoff_match = res.max_error <= tol;
    report.pass = report.pass && res.payoff_match;

    for (const auto& dev : stock_deviations(game, d, h, report.equilibrium)) {
      RepeatedConfig devcfg = config;
      devcfg.policies[h] = dev;
      auto dev_values = replica_values(devcfg, h, options.replicas, options.seed);
      res.deviations.push_back(
          compare(h, dev->name(), options.t_eval, options.margin, eq_values, std::move(dev_values)));
      report.pass = report.pass && res.deviations.back().not_improved;
    }
    report.coalitions.push_back(std::move(res));
  }
  return report;
}

nlohmann::json to_json(const DeviationReport& r) {
  return {{"coalition", r.coalition},
          {"deviation", r.deviation},
          {"t_eval", r.t_eval},
          {"replicas", r.deviation_values.size()},
          {"equilibrium_mean", r.equilibrium_mean},
          {"equilibrium_stderr", r.equilibrium_se},
          {"deviation_mean", r.deviation_mean},
          {"deviation_stderr", r.deviation_se},
          {"difference_mean", r.difference_mean},
          {"difference_stderr", r.difference_se},
          {"margin_stderrs", r.margin},
          {"verdict", r.not_improved ? "NotImproved" : "Improved"}};
}

nlohmann::json folk_report_json(const GGame& game, const FolkCheckReport& report) {
  nlohmann::json coalitions = nlohmann::json::array();
  for (std::size_t h = 0; h < report.coalitions.size(); ++h) {
    const auto& c = report.coalitions[h];
    std::vector<double> finals;
    std::vector<double> tails;
    for (const auto& e : c.replicas) {
      finals.push_back(e.average);
      tails.push_back(e.tail_liminf);
    }
    const Summary fs = summarize(finals);
    const Summary ts = summarize(tails);
    nlohmann::json devs = nlohmann::json::array();
    for (const auto& d : c.deviations) devs.push_back(to_json(d));
    coalitions.push_back({{"name", c.name},
                          {"chain", report.chain_cases.at(h)},
                          {"expected_payoff", c.expected},
                          {"payoff_range", c.payoff_range},
                          {"final_average", fs.mean},
                          {"tail_liminf_estimate", ts.mean},
                          {"stderr", fs.se},
                          {"replicas", c.replicas.size()},
                          {"max_abs_error", c.max_error},
                          {"payoff_match", c.payoff_match},
                          {"deviations", devs}});
  }
  return {{"equilibrium", mixed_to_json(game, report.equilibrium)},
          {"coalitions", coalitions},
          {"verdict", report.pass ? "PASS" : "FAIL"}};
}

nlohmann::json repeated_report_json(const GGame& game, const std::vector<PayoffReport>& runs) {
  nlohmann::json coalitions = nlohmann::json::array();
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    std::vector<double> finals;
    std::vector<double> tails;
    for (const auto& run : runs) {
      finals.push_back(run.coalitions.at(h).average);
      tails.push_back(run.coalitions.at(h).tail_liminf);
    }
    const Summary fs = summarize(finals);
    const Summary ts = summarize(tails);
    coalitions.push_back({{"name", game.structure().name(h)},
                          {"final_average", fs.mean},
                          {"tail_liminf_estimate", ts.mean},
                          {"stderr", fs.se},
                          {"replicas", runs.size()}});
  }
  return {{"stages", runs.empty() ? 0 : runs.front().stages}, {"coalitions", coalitions}};
}

}  // namespace graphgame
