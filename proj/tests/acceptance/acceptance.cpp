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

// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphgame/chain.hpp"
#include "graphgame/errors.hpp"
#include "graphgame/game.hpp"
#include "graphgame/graph.hpp"
#include "graphgame/game_io.hpp"
#include "graphgame/mixed.hpp"
#include "graphgame/parallel.hpp"
#include "graphgame/repeated.hpp"
#include "graphgame/simulator.hpp"
#include "testing.hpp"

namespace gg = graphgame;
namespace ts = graphgame::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// 1. Structural properties of the kernel on random connected graphs.
Outcome kernel_correctness() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> nd(2, 10);
  double worst_row = 0.0;
  double worst_db = 0.0;
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = nd(rng);
    const gg::Graph g = ts::random_connected_graph(rng, n, 0.3);
    const gg::Distribution mu = ts::random_distribution(rng, n);
    const gg::TransitionKernel k = gg::build_kernel(mu, g);
    const auto& m = k.matrix();
    bool ok = k.p() <= 0.5 && k.size() == n;
    for (std::size_t i = 0; i < n; ++i) {
      worst_row = std::max(worst_row, std::abs(m.row(ix(i)).sum() - 1.0));
      ok = ok && m(ix(i), ix(i)) >= 0.5 - 1e-12;
      for (std::size_t j = 0; j < n; ++j) {
        const double pij = m(ix(i), ix(j));
        if (i != j && pij != 0.0 && !g.has_edge(k.node(i), k.node(j))) ok = false;
        if (pij < 0.0) ok = false;
        const double db = std::abs(mu[k.node(i)] * pij - mu[k.node(j)] * m(ix(j), ix(i)));
        worst_db = std::max(worst_db, db);
      }
    }
    if (!ok) ++bad;
  }
  const bool pass = bad == 0 && worst_row <= 1e-12 && worst_db <= 1e-12;
  return {pass, "200 kernels, max row error " + fmt("%.2e", worst_row) + ", max balance residual " +
                    fmt("%.2e", worst_db) + ", structural failures " + std::to_string(bad)};
}

// 2. Stationary law by repeated squaring of P, independent of the library solver.
Outcome stationarity() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> nd(2, 10);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = nd(rng);
    const gg::Graph g = ts::random_connected_graph(rng, n, 0.3);
    const gg::Distribution mu = ts::random_distribution(rng, n);
    const gg::TransitionKernel k = gg::build_kernel(mu, g);
    Eigen::MatrixXd p = k.matrix();
    // 2^40 steps; rounding drift in the row sums stays far below 1e-9.
    for (int s = 0; s < 40; ++s) p = p * p;
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(ix(n), 1.0 / static_cast<double>(n)) * p;
    pi /= pi.sum();
    for (int s = 0; s < 1000; ++s) pi = pi * k.matrix();
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(pi(ix(i)) - mu[k.node(i)]));
    }
  }
  return {worst <= 1e-9, "200 kernels, max entrywise error " + fmt("%.2e", worst)};
}

gg::Graph shape(const std::string& kind, std::size_t n) {
  auto labels = ts::names(n);
  if (kind == "path") return gg::Graph::path(labels);
  if (kind == "cycle") return gg::Graph::cycle(labels);
  return gg::Graph::star(labels);
}

// 3. Contraction bound on (N-1)-step kernels of smoothed targets.
Outcome dobrushin_bound() {
  std::mt19937_64 rng(33);
  int checks = 0;
  int violations = 0;
  double tightest = 1.0;
  for (std::size_t n = 3; n <= 5; ++n) {
    // Targets with empty states, which is where smoothing matters.
    std::vector<gg::Distribution> targets{gg::Distribution::dirac(n, 0)};
    std::vector<double> half(n, 0.0);
    half[0] = half[n - 1] = 0.5;
    targets.emplace_back(half);
    std::vector<double> rough = ts::random_distribution(rng, n).masses();
    rough[1] = 0.0;
    targets.push_back(gg::Distribution::normalized(rough));
    for (const char* kind : {"path", "cycle", "star"}) {
      const gg::Graph g = shape(kind, n);
      for (const auto& mu : targets) {
        const double thr = static_cast<double>(gg::smoothing_threshold(mu));
        for (double k : {thr, 2 * thr, 10 * thr}) {
          const gg::SmoothedTarget sm = gg::smooth(mu, k);
          const gg::TransitionKernel kern = gg::build_kernel(sm.smoothed, g);
          const double delta = gg::dobrushin(gg::matrix_power(kern.matrix(), n - 1));
          const double cn = 1.0 / (2.0 * static_cast<double>((n - 1) * (n - 1)));
          const double bound = 1.0 - std::pow(cn / k, static_cast<double>(n - 1));
          ++checks;
          if (delta > bound) ++violations;
          tightest = std::min(tightest, bound - delta);
        }
      }
    }
  }
  return {violations == 0, std::to_string(checks) + " checks, violations " +
                               std::to_string(violations) + ", smallest slack " +
                               fmt("%.3e", tightest)};
}

// 4. Homogeneous chain on a path with uniform target.
Outcome path_convergence() {
  const gg::Graph g = gg::Graph::path(ts::names(5));
  const gg::Distribution mu = gg::Distribution::uniform(5);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const gg::Trace t = gg::run_chain(gg::make_target_chain(mu, g, gg::Schedule()),
                                      gg::Distribution::dirac(5, 0), 1'000'000, seed);
    worst = std::max(worst, gg::tv_distance(gg::empirical_distribution(t), mu));
  }
  return {worst <= 0.01, "10 seeds, T=1e6, max TV " + fmt("%.5f", worst)};
}

gg::Graph example_graph() {
  return gg::Graph::from_labels({"s1", "s2", "s3", "s4"},
                                {{"s1", "s3"}, {"s3", "s4"}, {"s2", "s4"}});
}

// 5. Slowly switching chain when the support is not connected.
Outcome component_convergence() {
  const gg::Graph g = example_graph();
  const gg::Distribution mu({0.5, 0.5, 0.0, 0.0});
  auto family = std::make_shared<const gg::NonhomogeneousKernel>(mu, g, gg::Schedule::power_gap(1, 3));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const gg::Trace t = gg::run_nonhomogeneous(family, gg::Distribution::dirac(4, 0), 10'000'000, seed);
    worst = std::max(worst, gg::tv_distance(gg::empirical_distribution(t), mu));
  }
  return {worst <= 0.05, "5 seeds, T=1e7, max TV " + fmt("%.4f", worst)};
}

// 6. Switching too fast: the chain mostly stays where it started.
Outcome counterexample() {
  const gg::Graph g = example_graph();
  const gg::Distribution mu({0.5, 0.5, 0.0, 0.0});
  auto family = std::make_shared<const gg::NonhomogeneousKernel>(mu, g, gg::Schedule::counterexample());
  const std::uint64_t steps = 100'000;
  std::vector<double> mass(100);
  gg::parallel_for(100, [&](std::size_t i) {
    const gg::Trace t = gg::run_nonhomogeneous(family, gg::Distribution::dirac(4, 0), steps, i + 1);
    mass[i] = static_cast<double>(t.counts[0]) / static_cast<double>(steps);
  });
  const auto stuck = std::count_if(mass.begin(), mass.end(), [](double m) { return m >= 0.9; });
  const double expected = 100 * ts::kFastChainSettleProbability;
  return {stuck >= 95, std::to_string(stuck) + "/100 seeds keep mass >= 0.9 at s1 (need 95; exact law gives " +
                           fmt("%.1f", expected) + " on average)"};
}

// 7. Support across components: rejected, and no walk crosses over.
Outcome impossibility() {
  const gg::Graph g = gg::Graph::from_labels({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  const gg::Distribution mu({0.5, 0.0, 0.5, 0.0});
  bool rejected = gg::classify_case(g, mu) == gg::CaseLabel::SupportSplit;
  auto expect_split = [&](const std::function<void()>& f) {
    try {
      f();
      rejected = false;
    } catch (const gg::SupportSplit&) {
    }
  };
  expect_split([&] { (void)gg::make_target_chain(mu, g, gg::Schedule()); });
  expect_split([&] {
    (void)gg::run_nonhomogeneous(mu, g, gg::Schedule(), gg::Distribution::dirac(4, 0), 10, 1);
  });

  // Breadth-first closure from each support node.
  bool separated = true;
  const auto supp = mu.support();
  for (std::size_t s : supp) {
    std::vector<bool> seen(g.size(), false);
    std::deque<gg::NodeId> queue{static_cast<gg::NodeId>(s)};
    seen[s] = true;
    while (!queue.empty()) {
      const gg::NodeId u = queue.front();
      queue.pop_front();
      for (gg::NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    for (std::size_t other : supp) {
      if (other != s && seen[other]) separated = false;
    }
  }
  return {rejected && separated, std::string("rejected: ") + (rejected ? "yes" : "no") +
                                     ", reachable sets disjoint: " + (separated ? "yes" : "no")};
}

std::vector<std::size_t> brute_force_equilibria(const gg::GGame& game) {
  std::vector<std::size_t> out;
  const std::size_t n = game.profile_count();
  for (std::size_t s = 0; s < n; ++s) {
    bool ok = true;
    const auto sp = game.profile(s);
    for (std::size_t t = 0; t < n && ok; ++t) {
      if (!game.graph().adjacent(static_cast<gg::NodeId>(s), static_cast<gg::NodeId>(t))) continue;
      const auto tp = game.profile(t);
      for (std::size_t h = 0; h < game.coalitions() && ok; ++h) {
        auto dev = sp;
        dev[h] = tp[h];
        ok = game.payoff(h, dev) <= game.payoff(h, sp);
      }
    }
    if (ok) out.push_back(s);
  }
  return out;
}

// Expected payoff to c when c plays pure a and the rest follow m.
double pure_value(const gg::GGame& g, const gg::MixedProfile& m, std::size_t c, std::size_t a) {
  double total = 0.0;
  for (std::size_t j = 0; j < g.profile_count(); ++j) {
    const auto s = g.profile(j);
    if (s[c] != a) continue;
    double w = 1.0;
    for (std::size_t h = 0; h < g.coalitions(); ++h) {
      if (h != c) w *= m[h][s[h]];
    }
    total += w * g.payoff(c, j);
  }
  return total;
}

// Sampler verdict: no random mixed deviation (vertices included) beats the
// candidate by more than 1e-9. Also tracks how far any sample exceeds the
// best pure deviation.
bool sampled_equilibrium(const gg::GGame& g, const gg::MixedProfile& m, std::mt19937_64& rng,
                         double& pure_excess) {
  std::gamma_distribution<double> gam(0.3, 1.0);
  bool stable = true;
  for (std::size_t c = 0; c < g.coalitions(); ++c) {
    const std::size_t k = g.strategy_count(c);
    std::vector<double> v(k);
    for (std::size_t a = 0; a < k; ++a) v[a] = pure_value(g, m, c, a);
    double own = 0.0;
    for (std::size_t a = 0; a < k; ++a) own += m[c][a] * v[a];
    const double best_pure = *std::max_element(v.begin(), v.end());
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> w(k, 0.0);
      if (static_cast<std::size_t>(s) < k) {
        w[static_cast<std::size_t>(s)] = 1.0;
      } else {
        double z = 0.0;
        for (double& x : w) z += (x = gam(rng));
        if (z <= 0.0) continue;
        for (double& x : w) x /= z;
      }
      double val = 0.0;
      for (std::size_t a = 0; a < k; ++a) val += w[a] * v[a];
      pure_excess = std::max(pure_excess, val - best_pure);
      if (val > own + 1e-9) stable = false;
    }
  }
  return stable;
}

// 8. Pure enumeration and the mixed check against brute force.
Outcome equilibrium_oracles() {
  std::mt19937_64 rng(808);
  int pure_mismatch = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const gg::GGame g = ts::random_game(rng, 3, 3, 0.35);
    std::vector<std::size_t> got;
    for (const auto& s : gg::pure_c_equilibria(g).profiles) got.push_back(g.flat(s));
    std::sort(got.begin(), got.end());
    if (got != brute_force_equilibria(g)) ++pure_mismatch;
  }
  int mixed_mismatch = 0;
  int candidates = 0;
  double pure_excess = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const gg::GGame g = ts::random_game(rng, 3, 3, 0.35);
    std::vector<gg::MixedProfile> cands;
    try {
      cands.push_back(gg::compute_mixed_equilibrium(g));
    } catch (const gg::NoConvergence&) {
    }
    cands.push_back(gg::MixedProfile::uniform(g));
    cands.push_back(gg::MixedProfile::dirac(g, g.profile(0)));
    gg::MixedProfile r;
    for (std::size_t h = 0; h < g.coalitions(); ++h) {
      r.parts.push_back(ts::random_distribution(rng, g.strategy_count(h)));
    }
    cands.push_back(r);
    for (const auto& m : cands) {
      ++candidates;
      if (gg::is_mixed_c_equilibrium(g, m, 1e-9) != sampled_equilibrium(g, m, rng, pure_excess)) {
        ++mixed_mismatch;
      }
    }
  }
  const bool pass = pure_mismatch == 0 && mixed_mismatch == 0 && pure_excess <= 1e-9;
  return {pass, "pure mismatches " + std::to_string(pure_mismatch) + "/500, mixed mismatches " +
                    std::to_string(mixed_mismatch) + "/" + std::to_string(candidates) +
                    ", max sample excess over pure bound " + fmt("%.1e", pure_excess)};
}

// 9. Independent factor chains give the product law.
Outcome product_independence() {
  const gg::Graph k2 = gg::Graph::complete({"x", "y"});
  const gg::Distribution half = gg::Distribution::uniform(2);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    gg::ProductChainSpec spec;
    spec.steps = 1'000'000;
    spec.seed = seed;
    spec.components = {{"A", half, k2, gg::Schedule(), std::nullopt},
                       {"B", half, k2, gg::Schedule(), std::nullopt}};
    const gg::Trace t = gg::run_product(spec);
    worst = std::max(worst, gg::tv_distance(gg::empirical_distribution(t), gg::Distribution::uniform(4)));
  }
  return {worst <= 0.02, "10 seeds, T=1e6, max joint TV " + fmt("%.5f", worst)};
}

// 10. Long-run payoffs and stock deviations on two fixtures.
Outcome folk_desk_check() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"matching_pennies.json", "coordination.json"}) {
    const gg::GGame g = ts::load_fixture_game(name);
    const gg::FolkCheckReport rep = gg::folk_check(g);
    pass = pass && rep.pass;
    double err = 0.0;
    std::size_t improved = 0;
    std::size_t tests = 0;
    for (const auto& c : rep.coalitions) {
      err = std::max(err, c.max_error / std::max(c.payoff_range, 1e-12));
      for (const auto& d : c.deviations) {
        ++tests;
        if (!d.not_improved) ++improved;
      }
    }
    detail += std::string(detail.empty() ? "" : "; ") + name + ": max error " +
              fmt("%.4f", err) + " of range, improving deviations " + std::to_string(improved) +
              "/" + std::to_string(tests);
  }
  return {pass, detail};
}

// 11. Factorization round trip and the four-cycle.
Outcome decomposition_round_trip() {
  std::mt19937_64 rng(1111);
  std::uniform_int_distribution<std::size_t> rd(1, 3);
  std::uniform_int_distribution<std::size_t> nd(1, 4);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<gg::Graph> f;
    std::vector<std::vector<std::string>> axes;
    const std::size_t r = rd(rng);
    for (std::size_t h = 0; h < r; ++h) {
      axes.push_back(ts::names(nd(rng), "s" + std::to_string(h) + "_"));
      f.push_back(ts::random_graph(rng, axes.back().size(), 0.5, axes.back()));
    }
    const auto d = gg::factorize(gg::strong_product(f), axes);
    if (!d || d->factors != f) ++bad;
  }
  bool four_cycle = false;
  try {
    (void)gg::require_decomposition(ts::load_fixture_game("four_cycle.json"));
  } catch (const gg::NotDecomposable&) {
    four_cycle = true;
  }
  return {bad == 0 && four_cycle, "round-trip failures " + std::to_string(bad) +
                                      "/100, four-cycle rejected: " + (four_cycle ? "yes" : "no")};
}

// 12. Two-stage check on every pure equilibrium of the decomposable fixtures.
Outcome two_stage() {
  int checked = 0;
  int bad = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(GRAPHGAME_FIXTURE_DIR)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    gg::GGame g;
    gg::Decomposition d;
    try {
      g = gg::load_game(path).game;
      d = gg::require_decomposition(g);
    } catch (const gg::Error&) {
      continue;
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    for (const auto& s : gg::pure_c_equilibria(g).profiles) {
      bool oracle = true;
      for (std::size_t h = 0; h < g.coalitions(); ++h) {
        for (std::size_t a = 0; a < g.strategy_count(h); ++a) {
          if (!d.factors[h].adjacent(static_cast<gg::NodeId>(s[h]), static_cast<gg::NodeId>(a))) continue;
          auto t = s;
          t[h] = a;
          if (g.payoff(h, t) > g.payoff(h, s)) oracle = false;
        }
      }
      const bool got = gg::two_stage_check(g, s);
      ++checked;
      if (!got || got != oracle) ++bad;
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " equilibria checked, failures " +
                                       std::to_string(bad)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "kernel correctness", 5, kernel_correctness},
      {2, "stationarity", 10, stationarity},
      {3, "Dobrushin bound", 5, dobrushin_bound},
      {4, "connected-support convergence", 30, path_convergence},
      {5, "single-component convergence", 120, component_convergence},
      {6, "fast-switching counterexample", 60, counterexample},
      {7, "split-support impossibility", 1, impossibility},
      {8, "equilibrium oracles", 60, equilibrium_oracles},
      {9, "product-chain independence", 30, product_independence},
      {10, "folk-theorem desk check", 180, folk_desk_check},
      {11, "decomposition round trip", 5, decomposition_round_trip},
      {12, "two-stage check", 5, two_stage},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("%s %2d %-32s %7.2fs (budget %gs%s)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_seconds, in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
