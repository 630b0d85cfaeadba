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

// Straight-line reference implementations used only by the tests. None of
// these call into the library code paths they are compared against.

#ifndef RISAC_TESTS_ORACLES_HPP
#define RISAC_TESTS_ORACLES_HPP

#include "risac/risac.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace risac::oracle {

inline MatC random_complex(Eigen::Index r, Eigen::Index c, CounterRng& rng) {
  MatC out(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) out(i, j) = rng.complex_gaussian();
  return out;
}

inline VecC random_unit_modulus(Eigen::Index n, CounterRng& rng) {
  VecC v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return v;
}

inline ChannelRealization random_channels(Eigen::Index K, Eigen::Index M, Eigen::Index N, CounterRng& rng) {
  ChannelRealization ch;
  ch.h_direct = random_complex(M, K, rng);
  ch.G = random_complex(M, N, rng);
  ch.h_reflect = random_complex(N, K, rng);
  return ch;
}

/// h_d,k + G diag(h_r,k) v by explicit loops.
inline VecC composite(Eigen::Index k, const ChannelRealization& ch, const VecC& v) {
  VecC h(ch.M());
  for (Eigen::Index m = 0; m < ch.M(); ++m) {
    Complex acc = ch.h_direct(m, k);
    for (Eigen::Index n = 0; n < ch.N(); ++n) acc += ch.G(m, n) * ch.h_reflect(n, k) * v(n);
    h(m) = acc;
  }
  return h;
}

inline Complex inner(const VecC& m, const VecC& h) {  // m^H h
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) acc += std::conj(m(i)) * h(i);
  return acc;
}

inline double mse(const VecC& m, const VecC& v, const ChannelRealization& ch, double P, double sigma2) {
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) norm2 += std::norm(m(i));
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ch.K(); ++k) worst = std::min(worst, std::norm(inner(m, composite(k, ch, v))));
  return sigma2 * norm2 / (P * worst);
}

inline MatR random_real(Eigen::Index r, Eigen::Index c, CounterRng& rng) {
  MatR out(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) out(i, j) = rng.gaussian();
  return out;
}

/// Uniform point of the product of unit disks (pairs (i, N+i)).
inline VecR random_in_disks(Eigen::Index n, CounterRng& rng) {
  VecR x(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt(rng.uniform()), a = 2.0 * std::numbers::pi * rng.uniform();
    x(i) = r * std::cos(a);
    x(n + i) = r * std::sin(a);
  }
  return x;
}

inline VecR random_in_ball(Eigen::Index d, CounterRng& rng) {
  VecR x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = rng.gaussian();
  return x * (std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / x.norm());
}

/// Nearest point of the unit disk to (a, b). Outside the disk, scans the
/// boundary angle coarsely and then bisects on the sign of the derivative of
/// the squared distance, 2 (a sin t - b cos t).
inline std::pair<double, double> nearest_in_disk(double a, double b) {
  if (a * a + b * b <= 1.0) return {a, b};
  auto dist = [&](double t) { return std::pow(std::cos(t) - a, 2) + std::pow(std::sin(t) - b, 2); };
  auto slope = [&](double t) { return a * std::sin(t) - b * std::cos(t); };
  double best_t = 0.0;
  for (int i = 0; i < 3600; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 3600;
    if (dist(t) < dist(best_t)) best_t = t;
  }
  double lo = best_t - 0.01, hi = best_t + 0.01;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {std::cos(t), std::sin(t)};
}

/// Mirror step evaluated literally in long double: w = grad Phi^{-1}(grad Phi(z) - gamma d),
/// then the closed-form projections (no log-space shift).
inline SaddlePoint mirror_step_reference(const SaddlePoint& z, const VecR& d, double gamma, DomainKind kind) {
  using LD = long double;
  const Eigen::Index D = z.x.size(), K = z.y.size();
  std::vector<LD> u(D), e(K);
  for (Eigen::Index i = 0; i < D; ++i) u[i] = static_cast<LD>(z.x(i)) - static_cast<LD>(gamma) * d(i);
  for (Eigen::Index k = 0; k < K; ++k) {
    const LD nu = 1.0L + std::log(static_cast<LD>(z.y(k))) - static_cast<LD>(gamma) * d(D + k);
    e[k] = std::exp(nu - 1.0L);
  }
  SaddlePoint out{VecR(D), VecR(K)};
  if (kind == DomainKind::UnitBall) {
    LD n2 = 0;
    for (LD x : u) n2 += x * x;
    const LD s = n2 > 1.0L ? 1.0L / std::sqrt(n2) : 1.0L;
    for (Eigen::Index i = 0; i < D; ++i) out.x(i) = static_cast<double>(u[i] * s);
  } else {
    const Eigen::Index n = D / 2;
    for (Eigen::Index i = 0; i < n; ++i) {
      const LD r2 = u[i] * u[i] + u[n + i] * u[n + i];
      const LD s = r2 >= 1.0L ? 1.0L / std::sqrt(r2) : 1.0L;
      out.x(i) = static_cast<double>(u[i] * s);
      out.x(n + i) = static_cast<double>(u[n + i] * s);
    }
  }
  LD sum = 0;
  for (LD x : e) sum += x;
  for (Eigen::Index k = 0; k < K; ++k) out.y(k) = static_cast<double>(sum == 1.0L ? e[k] : e[k] / sum);
  return out;
}

/// Largest eigenvalue of a symmetric matrix.
inline double max_eigenvalue(const MatR& a) {
  Eigen::SelfAdjointEigenSolver<MatR> es(a);
  return es.eigenvalues().maxCoeff();
}

}  // namespace risac::oracle

#endif  // RISAC_TESTS_ORACLES_HPP
