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

#ifndef GRAPHGAME_RNG_HPP
#define GRAPHGAME_RNG_HPP

#include <array>
#include <cstdint>
#include <random>

namespace graphgame {

// Seed of stream `stream` under `master`. Distinct streams are decorrelated
// through std::seed_seq mixing, so product components and replicas draw
// from independent generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// 64-bit Mersenne Twister with a platform-independent unit-interval draw.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream) : engine_(derive_seed(master, stream)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Index drawn from a probability vector by inversion.
  template <class Masses>
  std::size_t categorical(const Masses& masses) {
    const double u = uniform();
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      if (masses[i] <= 0.0) continue;
      cum += masses[i];
      last = i;
      if (u < cum) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphgame

#endif  // GRAPHGAME_RNG_HPP
