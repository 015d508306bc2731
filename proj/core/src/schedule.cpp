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

#include "graphgame/schedule.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "graphgame/errors.hpp"

namespace graphgame {
namespace {

constexpr auto kU64Max = std::numeric_limits<std::uint64_t>::max();

std::optional<std::uint64_t> narrow(const BigInt& v) {
  if (v > BigInt(kU64Max)) return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

std::uint64_t gap_length(const Schedule::PowerGap& pg, std::uint64_t l) {
  const double g = std::ceil(pg.c * std::pow(static_cast<double>(l), pg.exponent));
  if (!(g < 1.8e19)) return kU64Max;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Schedule::Schedule(Policy policy, Smoothing smoothing)
    : policy_(std::move(policy)), smoothing_(smoothing) {
  std::visit(overloaded{
                 [](const Theoretical& t) {
                   if (t.n == 0) throw ScheduleError("theoretical schedule needs n >= 1");
                 },
                 [](const PowerGap& pg) {
                   if (!(pg.c > 0.0) || !std::isfinite(pg.c) || !(pg.exponent >= 0.0) ||
                       !std::isfinite(pg.exponent)) {
                     throw ScheduleError("power-gap schedule needs c > 0 and exponent >= 0");
                   }
                 },
                 [](const Explicit& e) {
                   if (e.times.empty()) throw ScheduleError("explicit schedule is empty");
                   for (std::size_t i = 1; i < e.times.size(); ++i) {
                     if (e.times[i] <= e.times[i - 1]) {
                       throw ScheduleError("explicit schedule times must strictly increase");
                     }
                   }
                 },
                 [](const Unit&) {},
             },
             policy_);
}

Schedule Schedule::parse(std::string_view text, std::uint64_t n) {
  auto fields = [&] {
    std::vector<std::string> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(item);
    return out;
  }();
  if (fields.empty()) throw ScheduleError("empty schedule");
  const auto& kind = fields[0];
  try {
    if (kind == "theoretical" && fields.size() == 1) return theoretical(n);
    if (kind == "counterexample" && fields.size() == 1) return counterexample();
    if (kind == "powergap" && fields.size() == 3) {
      return power_gap(std::stod(fields[1]), std::stod(fields[2]));
    }
    if (kind == "explicit" && fields.size() == 2) {
      std::vector<std::uint64_t> times;
      std::stringstream ss(fields[1]);
      std::string item;
      while (std::getline(ss, item, ',')) times.push_back(std::stoull(item));
      return explicit_times(std::move(times));
    }
  } catch (const std::logic_error&) {
    throw ScheduleError("malformed schedule '" + std::string(text) + "'");
  }
  throw ScheduleError("unknown schedule '" + std::string(text) +
                      "' (expected theoretical, powergap:c:e, counterexample or explicit:t1,t2,..)");
}

std::uint64_t Schedule::start() const { return *boundary(1); }

BigInt Schedule::exact_boundary(std::uint64_t l) const {
  if (l == 0) throw ScheduleError("schedule intervals are numbered from 1");
  return std::visit(overloaded{
                        [&](const Theoretical& t) -> BigInt {
                          return boost::multiprecision::pow(BigInt(l),
                                                            static_cast<unsigned>(5 * t.n));
                        },
                        [&](const PowerGap& pg) -> BigInt {
                          BigInt t = 1;
                          for (std::uint64_t i = 1; i < l; ++i) t += gap_length(pg, i);
                          return t;
                        },
                        [&](const Explicit& e) -> BigInt {
                          if (l > e.times.size()) {
                            throw ScheduleError("explicit schedule has no boundary " +
                                                std::to_string(l));
                          }
                          return BigInt(e.times[l - 1]);
                        },
                        [&](const Unit&) -> BigInt { return BigInt(l); },
                    },
                    policy_);
}

std::optional<std::uint64_t> Schedule::boundary(std::uint64_t l) const {
  if (l == 0) throw ScheduleError("schedule intervals are numbered from 1");
  if (const auto* e = std::get_if<Explicit>(&policy_)) {
    if (l > e->times.size()) return std::nullopt;
    return e->times[l - 1];
  }
  if (const auto* pg = std::get_if<PowerGap>(&policy_)) {
    std::uint64_t t = 1;
    for (std::uint64_t i = 1; i < l; ++i) {
      const auto g = gap_length(*pg, i);
      if (g > kU64Max - t) return std::nullopt;
      t += g;
    }
    return t;
  }
  return narrow(exact_boundary(l));
}

std::optional<std::uint64_t> Schedule::successor(std::uint64_t l, std::uint64_t t_l) const {
  return std::visit(overloaded{
                        [&](const Theoretical&) { return boundary(l + 1); },
                        [&](const PowerGap& pg) -> std::optional<std::uint64_t> {
                          const auto g = gap_length(pg, l);
                          if (g > kU64Max - t_l) return std::nullopt;
                          return t_l + g;
                        },
                        [&](const Explicit&) { return boundary(l + 1); },
                        [&](const Unit&) -> std::optional<std::uint64_t> {
                          if (t_l == kU64Max) return std::nullopt;
                          return t_l + 1;
                        },
                    },
                    policy_);
}

std::uint64_t Schedule::interval_of(std::uint64_t t) const {
  const std::uint64_t first = start();
  if (t < first) {
    throw ScheduleError("time " + std::to_string(t) + " precedes the first switching time " +
                        std::to_string(first));
  }
  if (std::holds_alternative<Unit>(policy_)) return t;
  std::uint64_t l = 1;
  std::uint64_t t_l = first;
  while (true) {
    const auto next = successor(l, t_l);
    if (!next || t < *next) return l;
    ++l;
    t_l = *next;
  }
}

double Schedule::smoothing_level(std::uint64_t l) const {
  if (l == 0) throw ScheduleError("schedule intervals are numbered from 1");
  if (smoothing_ == Smoothing::Linear) return static_cast<double>(l);
  return std::ldexp(1.0, static_cast<int>(std::min(l, kMaxDoublingExponent)));
}

std::string Schedule::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Theoretical& t) { os << "theoretical(t_l = l^" << 5 * t.n << ")"; },
                 [&](const PowerGap& pg) { os << "powergap:" << pg.c << ":" << pg.exponent; },
                 [&](const Explicit& e) { os << "explicit(" << e.times.size() << " times)"; },
                 [&](const Unit&) { os << "unit"; },
             },
             policy_);
  if (smoothing_ == Smoothing::Doubling) os << " with k = 2^l";
  return os.str();
}

}  // namespace graphgame
