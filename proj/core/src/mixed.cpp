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

#include "graphgame/mixed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "graphgame/errors.hpp"

namespace graphgame {

Distribution::Distribution(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw InvalidInput("distribution over an empty space");
  double sum = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidInput("distribution mass outside [0,1]");
    sum += m;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidInput("distribution masses sum to " + std::to_string(sum));
  }
}

Distribution Distribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double& w : weights) {
    if (!std::isfinite(w)) throw InvalidInput("non-finite weight");
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (sum <= 0.0) throw InvalidInput("weights have no positive mass");
  for (double& w : weights) w /= sum;
  return Distribution(std::move(weights));
}

Distribution Distribution::dirac(std::size_t n, std::size_t at) {
  if (at >= n) throw InvalidInput("dirac position out of range");
  std::vector<double> m(n, 0.0);
  m[at] = 1.0;
  return Distribution(std::move(m));
}

Distribution Distribution::uniform(std::size_t n) {
  return Distribution::normalized(std::vector<double>(n, 1.0));
}

Distribution Distribution::uniform_on(std::size_t n, std::span<const std::size_t> support) {
  std::vector<double> w(n, 0.0);
  for (std::size_t i : support) w.at(i) = 1.0;
  return Distribution::normalized(std::move(w));
}

std::vector<std::size_t> Distribution::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] > 0.0) out.push_back(i);
  }
  return out;
}

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw InvalidInput("tv_distance: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

MixedProfile MixedProfile::dirac(const GGame& game, const StrategyProfile& s) {
  if (!game.valid(s)) throw InvalidInput("profile does not belong to the game");
  MixedProfile out;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    out.parts.push_back(Distribution::dirac(game.strategy_count(h), s[h]));
  }
  return out;
}

MixedProfile MixedProfile::uniform(const GGame& game) {
  MixedProfile out;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    out.parts.push_back(Distribution::uniform(game.strategy_count(h)));
  }
  return out;
}

double MixedProfile::joint_mass(const GGame& game, std::size_t flat) const {
  double m = 1.0;
  for (std::size_t h = 0; h < parts.size(); ++h) m *= parts[h][game.indexer().coordinate(flat, h)];
  return m;
}

namespace {

void check_shape(const GGame& game, const MixedProfile& profile) {
  if (profile.size() != game.coalitions()) {
    throw InvalidInput("mixed profile has " + std::to_string(profile.size()) +
                       " components, game has " + std::to_string(game.coalitions()) +
                       " coalitions");
  }
  for (std::size_t h = 0; h < profile.size(); ++h) {
    if (profile[h].size() != game.strategy_count(h)) {
      throw InvalidInput("mixed profile component " + std::to_string(h) + " has the wrong size");
    }
  }
}

}  // namespace

double expected_payoff(const GGame& game, const MixedProfile& profile, std::size_t c) {
  check_shape(game, profile);
  if (c >= game.coalitions()) throw InvalidInput("coalition index out of range");
  double total = 0.0;
  for (std::size_t j = 0; j < game.profile_count(); ++j) {
    const double w = profile.joint_mass(game, j);
    if (w != 0.0) total += game.payoff(c, j) * w;
  }
  return total;
}

std::vector<double> pure_deviation_payoffs(const GGame& game, const MixedProfile& profile,
                                           std::size_t c) {
  check_shape(game, profile);
  if (c >= game.coalitions()) throw InvalidInput("coalition index out of range");
  const auto& ix = game.indexer();
  std::vector<double> u(game.strategy_count(c), 0.0);
  for (std::size_t j = 0; j < game.profile_count(); ++j) {
    double w = 1.0;
    for (std::size_t h = 0; h < profile.size() && w != 0.0; ++h) {
      if (h != c) w *= profile[h][ix.coordinate(j, h)];
    }
    if (w != 0.0) u[ix.coordinate(j, c)] += game.payoff(c, j) * w;
  }
  return u;
}

namespace {

BestResponse best_of(const std::vector<double>& u) {
  BestResponse br;
  br.value = *std::max_element(u.begin(), u.end());
  const double slack = 1e-12 * (1.0 + std::abs(br.value));
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] >= br.value - slack) br.argmax.push_back(a);
  }
  return br;
}

double own_value(const std::vector<double>& u, const Distribution& own) {
  double v = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (own[a] != 0.0) v += own[a] * u[a];
  }
  return v;
}

}  // namespace

BestResponse best_pure_response(const GGame& game, const MixedProfile& profile, std::size_t c) {
  return best_of(pure_deviation_payoffs(game, profile, c));
}

double max_deviation_gain(const GGame& game, const MixedProfile& profile) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < game.coalitions(); ++c) {
    const auto u = pure_deviation_payoffs(game, profile, c);
    const double best = *std::max_element(u.begin(), u.end());
    worst = std::max(worst, best - own_value(u, profile[c]));
  }
  return worst;
}

bool is_mixed_c_equilibrium(const GGame& game, const MixedProfile& profile, double tol) {
  if (tol < 0.0) throw InvalidInput("tolerance must be non-negative");
  for (std::size_t c = 0; c < game.coalitions(); ++c) {
    const auto u = pure_deviation_payoffs(game, profile, c);
    const double best = *std::max_element(u.begin(), u.end());
    if (own_value(u, profile[c]) < best - tol) return false;
  }
  return true;
}

bool pure_in_mixed(const GGame& game, const StrategyProfile& s) {
  return is_mixed_c_equilibrium(game, MixedProfile::dirac(game, s), 0.0);
}

namespace {

std::vector<std::size_t> bits_of(unsigned mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) out.push_back(i);
  }
  return out;
}

// Subsets of {0..n-1} ordered by size, then by mask value.
std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n) {
  std::vector<unsigned> masks;
  for (unsigned m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return std::popcount(a) < std::popcount(b);
  });
  std::vector<std::vector<std::size_t>> out;
  for (unsigned m : masks) out.push_back(bits_of(m));
  return out;
}

// Mixing weights over `cols` making the row player indifferent across `rows`
// of `pay` (rows x cols, full strategy spaces). Empty on failure.
std::vector<double> indifference_weights(const Eigen::MatrixXd& pay,
                                         const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols,
                                         std::size_t full_cols) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nr + 1, nc + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nr + 1);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = pay(rows[i], cols[j]);
    m(i, nc) = -1.0;
  }
  for (Eigen::Index j = 0; j < nc; ++j) m(nr, j) = 1.0;
  rhs(nr) = 1.0;
  const Eigen::VectorXd z = m.completeOrthogonalDecomposition().solve(rhs);
  if (!z.allFinite() || (m * z - rhs).norm() > 1e-9) return {};
  std::vector<double> w(full_cols, 0.0);
  for (Eigen::Index j = 0; j < nc; ++j) {
    if (z(j) < -1e-9) return {};
    w[cols[j]] = std::max(0.0, z(j));
  }
  return w;
}

std::optional<MixedProfile> try_pure(const GGame& game, double tol) {
  for (std::size_t j = 0; j < game.profile_count(); ++j) {
    auto mp = MixedProfile::dirac(game, game.profile(j));
    if (is_mixed_c_equilibrium(game, mp, tol)) return mp;
  }
  return std::nullopt;
}

// Two coalitions (a, b) mix; the others are held at pure strategies.
std::optional<MixedProfile> try_pairs(const GGame& game, double tol) {
  const std::size_t r = game.coalitions();
  const auto& ix = game.indexer();
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a + 1; b < r; ++b) {
      const std::size_t na = game.strategy_count(a);
      const std::size_t nb = game.strategy_count(b);
      const auto subs_a = subsets_by_size(na);
      const auto subs_b = subsets_by_size(nb);
      for (std::size_t j0 = 0; j0 < game.profile_count(); ++j0) {
        // One representative per assignment of the non-mixing coalitions.
        if (ix.coordinate(j0, a) != 0 || ix.coordinate(j0, b) != 0) continue;
        Eigen::MatrixXd pa(na, nb), pb(na, nb);
        for (std::size_t i = 0; i < na; ++i) {
          for (std::size_t k = 0; k < nb; ++k) {
            const std::size_t j = j0 + i * ix.stride(a) + k * ix.stride(b);
            pa(i, k) = game.payoff(a, j);
            pb(i, k) = game.payoff(b, j);
          }
        }
        const Eigen::MatrixXd pbt = pb.transpose();
        for (const auto& sa : subs_a) {
          for (const auto& sb : subs_b) {
            if (sa.size() == 1 && sb.size() == 1) continue;
            auto y = indifference_weights(pa, sa, sb, nb);
            if (y.empty()) continue;
            auto x = indifference_weights(pbt, sb, sa, na);
            if (x.empty()) continue;
            MixedProfile mp;
            const auto fixed = game.profile(j0);
            for (std::size_t h = 0; h < r; ++h) {
              if (h == a) {
                mp.parts.push_back(Distribution::normalized(x));
              } else if (h == b) {
                mp.parts.push_back(Distribution::normalized(y));
              } else {
                mp.parts.push_back(Distribution::dirac(game.strategy_count(h), fixed[h]));
              }
            }
            if (is_mixed_c_equilibrium(game, mp, tol)) return mp;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Every coalition mixes over a support of size >= 2. The indifference
// conditions are multilinear, so each support combination is solved by
// Newton's method from a few fixed starting points and certified afterwards.
std::optional<MixedProfile> try_all_mixing(const GGame& game, double tol) {
  const std::size_t r = game.coalitions();
  const auto& ix = game.indexer();
  std::vector<std::vector<std::vector<std::size_t>>> subs(r);
  for (std::size_t h = 0; h < r; ++h) {
    for (auto& s : subsets_by_size(game.strategy_count(h))) {
      if (s.size() >= 2) subs[h].push_back(std::move(s));
    }
    if (subs[h].empty()) return std::nullopt;
  }

  std::vector<std::size_t> pick(r, 0);
  std::vector<std::size_t> offset(r + 1, 0);
  std::vector<std::vector<double>> mass(r);

  // Layout of z: masses on each support, then one value per coalition.
  auto unpack = [&](const Eigen::VectorXd& z) {
    for (std::size_t h = 0; h < r; ++h) {
      mass[h].assign(game.strategy_count(h), 0.0);
      const auto& sup = subs[h][pick[h]];
      for (std::size_t i = 0; i < sup.size(); ++i) {
        mass[h][sup[i]] = z(static_cast<Eigen::Index>(offset[h] + i));
      }
    }
  };
  auto residual = [&](const Eigen::VectorXd& z) {
    unpack(z);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(z.size());
    for (std::size_t h = 0; h < r; ++h) {
      const auto& sup = subs[h][pick[h]];
      std::vector<double> u(game.strategy_count(h), 0.0);
      for (std::size_t j = 0; j < game.profile_count(); ++j) {
        double w = 1.0;
        for (std::size_t g = 0; g < r && w != 0.0; ++g) {
          if (g != h) w *= mass[g][ix.coordinate(j, g)];
        }
        if (w != 0.0) u[ix.coordinate(j, h)] += w * game.payoff(h, j);
      }
      const double v = z(static_cast<Eigen::Index>(offset[r] + h));
      double sum = -1.0;
      for (std::size_t i = 0; i < sup.size(); ++i) {
        f(static_cast<Eigen::Index>(offset[h] + i)) = u[sup[i]] - v;
        sum += mass[h][sup[i]];
      }
      f(static_cast<Eigen::Index>(offset[r] + h)) = sum;
    }
    return f;
  };

  std::mt19937_64 starts(0x5eedULL);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  while (true) {
    for (std::size_t h = 0; h < r; ++h) offset[h + 1] = offset[h] + subs[h][pick[h]].size();
    const auto n = static_cast<Eigen::Index>(offset[r] + r);
    for (int attempt = 0; attempt < 3; ++attempt) {
      Eigen::VectorXd z(n);
      for (std::size_t h = 0; h < r; ++h) {
        const auto m = subs[h][pick[h]].size();
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double w = attempt == 0 ? 1.0 : unit(starts);
          z(static_cast<Eigen::Index>(offset[h] + i)) = w;
          total += w;
        }
        for (std::size_t i = 0; i < m; ++i) z(static_cast<Eigen::Index>(offset[h] + i)) /= total;
        z(static_cast<Eigen::Index>(offset[r] + h)) = 0.0;
      }
      Eigen::VectorXd f = residual(z);
      for (int it = 0; it < 50 && f.norm() > 1e-13; ++it) {
        Eigen::MatrixXd jac(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
          Eigen::VectorXd zc = z;
          const double step = 1e-7 * std::max(1.0, std::abs(z(c)));
          zc(c) += step;
          jac.col(c) = (residual(zc) - f) / step;
        }
        const Eigen::VectorXd dz = jac.completeOrthogonalDecomposition().solve(-f);
        if (!dz.allFinite()) break;
        z += dz;
        f = residual(z);
      }
      if (!f.allFinite() || f.norm() > 1e-8) continue;
      unpack(z);
      bool ok = true;
      MixedProfile mp;
      for (std::size_t h = 0; h < r && ok; ++h) {
        for (double& m : mass[h]) {
          if (m < -1e-9) ok = false;
          m = std::max(0.0, m);
        }
        if (ok) mp.parts.push_back(Distribution::normalized(mass[h]));
      }
      if (ok && is_mixed_c_equilibrium(game, mp, tol)) return mp;
    }
    // Next support combination, odometer style.
    std::size_t h = 0;
    while (h < r && ++pick[h] == subs[h].size()) pick[h++] = 0;
    if (h == r) break;
  }
  return std::nullopt;
}

MixedProfile fictitious_play(const GGame& game, const MixedSolverOptions& options) {
  const std::size_t r = game.coalitions();
  std::vector<std::vector<double>> avg(r);
  for (std::size_t h = 0; h < r; ++h) {
    avg[h].assign(game.strategy_count(h), 0.0);
    avg[h][0] = 1.0;
  }
  auto as_profile = [&] {
    MixedProfile mp;
    for (const auto& v : avg) mp.parts.push_back(Distribution::normalized(v));
    return mp;
  };
  std::vector<std::size_t> reply(r);
  for (std::uint64_t it = 1; it <= options.max_iterations; ++it) {
    const auto current = as_profile();
    if (it % 64 == 0 && is_mixed_c_equilibrium(game, current, options.tol)) return current;
    for (std::size_t h = 0; h < r; ++h) {
      reply[h] = best_pure_response(game, current, h).argmax.front();
    }
    const double step = 1.0 / static_cast<double>(it + 1);
    for (std::size_t h = 0; h < r; ++h) {
      for (double& m : avg[h]) m *= 1.0 - step;
      avg[h][reply[h]] += step;
    }
  }
  auto last = as_profile();
  if (is_mixed_c_equilibrium(game, last, options.tol)) return last;
  throw NoConvergence("fictitious play did not certify an equilibrium within " +
                      std::to_string(options.max_iterations) + " iterations (gain " +
                      std::to_string(max_deviation_gain(game, last)) + ")");
}

}  // namespace

MixedProfile compute_mixed_equilibrium(const GGame& game, const MixedSolverOptions& options) {
  if (auto pure = try_pure(game, options.tol)) return *pure;
  bool small = game.coalitions() <= options.max_enumerated_coalitions;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    small = small && game.strategy_count(h) <= options.max_enumerated_strategies;
  }
  if (small) {
    if (auto found = try_pairs(game, options.tol)) return *found;
    if (game.coalitions() >= 3) {
      if (auto found = try_all_mixing(game, options.tol)) return *found;
    }
  }
  return fictitious_play(game, options);
}

nlohmann::json mixed_to_json(const GGame& game, const MixedProfile& profile) {
  check_shape(game, profile);
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t h = 0; h < profile.size(); ++h) {
    out[game.structure().name(h)] = profile[h].masses();
  }
  return out;
}

MixedProfile mixed_from_json(const GGame& game, const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidInput("mixed profile: expected an object");
  MixedProfile out;
  for (std::size_t h = 0; h < game.coalitions(); ++h) {
    const auto& name = game.structure().name(h);
    if (!doc.contains(name)) throw InvalidInput("mixed profile: missing coalition '" + name + "'");
    const auto& arr = doc.at(name);
    if (!arr.is_array() || arr.size() != game.strategy_count(h)) {
      throw InvalidInput("mixed profile." + name + ": expected " +
                         std::to_string(game.strategy_count(h)) + " masses");
    }
    std::vector<double> m;
    for (const auto& v : arr) {
      if (!v.is_number()) throw InvalidInput("mixed profile." + name + ": expected numbers");
      m.push_back(v.get<double>());
    }
    out.parts.emplace_back(std::move(m));
  }
  return out;
}

}  // namespace graphgame
