// SPDX-License-Identifier: Apache-2.0
//
// risac: RIS-assisted over-the-air computation optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISAC_RNG_HPP
#define RISAC_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace risac {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32-10 bijection (Salmon et al., "Parallel random numbers: as easy
/// as 1, 2, 3", SC'11). Output matches the Random123 reference vectors.
inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Counter-based, splittable generator built on Philox4x32-10.
///
/// Every draw is a pure function of (key, counter), so a value can be fetched
/// by index (`block_at`, `complex_gaussian_at`) without touching any other
/// stream state. `split` derives an independent child key; the sequential
/// interface (`operator()`) walks a private counter and satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t seed() const { return (std::uint64_t{key_[1]} << 32) | key_[0]; }

  CounterRng split(std::uint64_t stream) const {
    // Hash the stream id under the parent key, in a counter region the
    // indexed accessors never reach (top word all ones).
    const PhiloxBlock b = philox4x32_10(
        {static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0xFFFFFFFFu,
         0xFFFFFFFFu},
        key_);
    return CounterRng((std::uint64_t{b[1]} << 32) | b[0]);
  }

  PhiloxBlock block_at(std::uint64_t a, std::uint64_t b) const {
    return philox4x32_10({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)},
                         key_);
  }

  /// Two uniforms in (0, 1] drawn from the block at index (a, b).
  std::array<double, 2> uniform_pair_at(std::uint64_t a, std::uint64_t b) const {
    const PhiloxBlock w = block_at(a, b);
    return {to_open_unit(w[0], w[1]), to_open_unit(w[2], w[3])};
  }

  /// CN(0, 1) sample (E|z|^2 = 1) at index (a, b), by Box-Muller.
  std::complex<double> complex_gaussian_at(std::uint64_t a, std::uint64_t b) const {
    const auto [u1, u2] = uniform_pair_at(a, b);
    const double r = std::sqrt(-std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  result_type operator()() {
    if (buffered_ == 0) {
      buf_ = block_at(counter_++, 0xFFFFFFFF00000000ull);
      buffered_ = 2;
    }
    const int i = 2 - buffered_--;
    return (std::uint64_t{buf_[2 * i + 1]} << 32) | buf_[2 * i];
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::complex<double> complex_gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Real N(0, 1).
  double gaussian() { return std::sqrt(2.0) * complex_gaussian().real(); }

 private:
  static double to_open_unit(std::uint32_t lo, std::uint32_t hi) {
    const std::uint64_t x = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return static_cast<double>(x + 1) * 0x1.0p-53;
  }

  PhiloxKey key_;
  std::uint64_t counter_ = 0;
  PhiloxBlock buf_{};
  int buffered_ = 0;
};

}  // namespace risac

#endif  // RISAC_RNG_HPP
