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

#ifndef GRAPHGAME_SCHEDULE_HPP
#define GRAPHGAME_SCHEDULE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace graphgame {

using BigInt = boost::multiprecision::cpp_int;

// Increasing switching times t_1 < t_2 < ... of a nonhomogeneous chain,
// together with the smoothing level k(l) used on [t_l, t_{l+1}).
class Schedule {
 public:
  // t_l = l^(5 n). Boundaries are exact big integers; past 2^64 they are
  // unreachable by any simulation and reported as nullopt.
  struct Theoretical {
    std::uint64_t n = 1;
  };
  // t_1 = 1, t_{l+1} = t_l + max(1, ceil(c * l^exponent)).
  struct PowerGap {
    double c = 1.0;
    double exponent = 3.0;
  };
  // Listed times; the last interval is unbounded.
  struct Explicit {
    std::vector<std::uint64_t> times;
  };
  // t_l = l.
  struct Unit {};

  using Policy = std::variant<Theoretical, PowerGap, Explicit, Unit>;

  // k(l) = l, or k(l) = 2^l (capped at kMaxDoublingExponent).
  enum class Smoothing { Linear, Doubling };
  static constexpr std::uint64_t kMaxDoublingExponent = 1000;

  Schedule() : Schedule(PowerGap{}) {}
  explicit Schedule(Policy policy, Smoothing smoothing = Smoothing::Linear);

  static Schedule theoretical(std::uint64_t n) { return Schedule(Theoretical{n}); }
  static Schedule power_gap(double c, double exponent) { return Schedule(PowerGap{c, exponent}); }
  static Schedule explicit_times(std::vector<std::uint64_t> times) {
    return Schedule(Explicit{std::move(times)});
  }
  // Unit steps with k(l) = 2^l: switches far too fast for convergence.
  static Schedule counterexample() { return Schedule(Unit{}, Smoothing::Doubling); }

  // Parses "theoretical", "powergap:c:e", "counterexample" or
  // "explicit:t1,t2,...". `n` is the state-space size for "theoretical".
  static Schedule parse(std::string_view text, std::uint64_t n);

  const Policy& policy() const { return policy_; }
  Smoothing smoothing() const { return smoothing_; }
  bool is_theoretical() const { return std::holds_alternative<Theoretical>(policy_); }

  std::uint64_t start() const;
  // t_l for l >= 1; nullopt when it does not fit in 64 bits or lies past
  // the end of an explicit list.
  std::optional<std::uint64_t> boundary(std::uint64_t l) const;
  BigInt exact_boundary(std::uint64_t l) const;
  // t_{l+1} given t_l, in O(1) for every policy except Theoretical.
  std::optional<std::uint64_t> successor(std::uint64_t l, std::uint64_t t_l) const;
  // The l with t in [t_l, t_{l+1}). Throws ScheduleError when t < t_1.
  std::uint64_t interval_of(std::uint64_t t) const;
  double smoothing_level(std::uint64_t l) const;

  std::string describe() const;

 private:
  Policy policy_;
  Smoothing smoothing_;
};

}  // namespace graphgame

#endif  // GRAPHGAME_SCHEDULE_HPP
