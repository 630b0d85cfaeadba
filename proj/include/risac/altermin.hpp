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

#ifndef RISAC_ALTERMIN_HPP
#define RISAC_ALTERMIN_HPP

#include "risac/aircomp.hpp"
#include "risac/channel.hpp"
#include "risac/rng.hpp"
#include "risac/saddle.hpp"
#include "risac/types.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace risac {

enum class InitKind { MatchedFilter, Random };

struct AlterMinSettings {
  double eps_outer = 1e-5;
  double eps_inner = 1e-5;
  double eps_saddle = 1e-5;
  int max_outer = 100;
  int max_inner = 100;
  int max_saddle_iter = 100000;
  bool descent_safeguard = true;
  InitKind init = InitKind::MatchedFilter;

  void validate() const {
    if (!(eps_outer > 0.0 && eps_inner > 0.0 && eps_saddle > 0.0))
      throw std::invalid_argument("AlterMinSettings: thresholds must be > 0");
    if (max_outer < 1 || max_inner < 1 || max_saddle_iter < 1)
      throw std::invalid_argument("AlterMinSettings: iteration caps must be >= 1");
  }
};

struct LinkBudget {
  double power = 1.0;
  double sigma2 = 1e-12;
};

// An SCA step may raise the true objective by at most this much.
inline constexpr double kDescentSlack = 1e-9;
// Re-solves with a 10x tighter saddle tolerance before keeping the incumbent.
inline constexpr int kMaxSafeguardRetries = 3;

/// Linearization of the concave phase objective at x_n (tangent majorant):
/// p_k = 2 (A_k x_n - b_k), q_k = -x_n^T A_k x_n - |c_k|^2.
inline SurrogateData surrogate_v(const VecR& x_n, const LiftedVSubproblem& lifted) {
  if (x_n.size() != lifted.dim()) throw std::invalid_argument("surrogate_v: dimension mismatch");
  SurrogateData s;
  s.domain = DomainKind::DiskProduct;
  s.P.resize(lifted.K(), lifted.dim());
  s.q.resize(lifted.K());
  for (Eigen::Index k = 0; k < lifted.K(); ++k) {
    const VecR ax = lifted.A_tilde[k] * x_n;
    s.P.row(k) = 2.0 * (ax - lifted.b.col(k)).transpose();
    s.q(k) = -x_n.dot(ax) - lifted.c_abs2(k);
  }
  return s;
}

/// p_k = 2 H_k x_n, q_k = -x_n^T H_k x_n.
inline SurrogateData surrogate_m(const VecR& x_n, const LiftedMSubproblem& lifted) {
  if (x_n.size() != lifted.dim()) throw std::invalid_argument("surrogate_m: dimension mismatch");
  SurrogateData s;
  s.domain = DomainKind::UnitBall;
  s.P.resize(lifted.K(), lifted.dim());
  s.q.resize(lifted.K());
  for (Eigen::Index k = 0; k < lifted.K(); ++k) {
    const VecR hx = lifted.H_tilde[k] * x_n;
    s.P.row(k) = 2.0 * hx.transpose();
    s.q(k) = -x_n.dot(hx);
  }
  return s;
}

struct ScaResult {
  VecR x;
  int iterations = 0;
  bool converged = false;
  long saddle_iterations = 0;
  int safeguard_retries = 0;
  std::vector<double> objective;  // true objective at x_0, x_1, ...
};

namespace detail {

template <class Lifted, class MakeSurrogate>
ScaResult sca_loop(VecR x, const Lifted& lifted, MakeSurrogate make_surrogate, DomainKind domain,
                   const AlterMinSettings& settings) {
  settings.validate();
  ScaResult res;
  x = project_primal(domain, x);
  double f = lifted.objective(x);
  res.objective.push_back(f);
  for (int n = 0; n < settings.max_inner; ++n) {
    const SurrogateData data = make_surrogate(x, lifted);
    SaddleOptions opts;
    opts.eps = settings.eps_saddle;
    opts.max_iter = settings.max_saddle_iter;
    bool accepted = false;
    VecR candidate;
    double f_new = f;
    for (int attempt = 0; attempt <= kMaxSafeguardRetries; ++attempt) {
      const SaddleResult sol = solve_saddle(data, warm_start(data, x), opts);
      res.saddle_iterations += sol.iterations;
      candidate = sol.x;
      f_new = lifted.objective(candidate);
      if (!settings.descent_safeguard || f_new <= f + kDescentSlack) {
        accepted = true;
        break;
      }
      ++res.safeguard_retries;
      opts.eps *= 0.1;
    }
    ++res.iterations;
    if (!accepted) {
      // Keep the incumbent: no step made progress.
      res.converged = true;
      break;
    }
    const double decrease = f - f_new;
    x = std::move(candidate);
    f = f_new;
    res.objective.push_back(f);
    if (decrease < settings.eps_inner) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  return res;
}

}  // namespace detail

/// SCA over the relaxed phase set: repeat (linearize, solve saddle problem)
/// until the true max-objective decreases by less than eps_inner.
inline ScaResult sca_loop_v(const VecR& v_start, const LiftedVSubproblem& lifted,
                            const AlterMinSettings& settings) {
  return detail::sca_loop(v_start, lifted, surrogate_v, DomainKind::DiskProduct, settings);
}

/// SCA over the unit ball for the beamformer.
inline ScaResult sca_loop_m(const VecR& m_start, const LiftedMSubproblem& lifted,
                            const AlterMinSettings& settings) {
  return detail::sca_loop(m_start, lifted, surrogate_m, DomainKind::UnitBall, settings);
}

/// Each pair (x_i, x_{N+i}) scaled to unit norm; a zero pair maps to phase 0.
inline PhaseShiftVector project_unit_modulus(const VecR& v_lift) {
  const VecC v = unlift(v_lift);
  PhaseShiftVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v(i));
    out(i) = r > 0.0 ? v(i) / r : Complex(1.0, 0.0);
  }
  return out;
}

struct ConvergenceLog {
  struct Row {
    int outer_iter = 0;
    double objective = 0.0;  // max_k -|m^H h_k|^2 on the normalized channels
    double mse = 0.0;
    int inner_iters_v = 0;
    int inner_iters_m = 0;
    double elapsed_ms = 0.0;
  };
  std::vector<Row> rows;
  // True subproblem objective along every inner SCA run.
  std::vector<std::vector<double>> inner_v;
  std::vector<std::vector<double>> inner_m;

  void write_csv(std::ostream& os) const {
    os << "outer_iter,objective,mse,inner_iters_v,inner_iters_m,elapsed_ms\n";
    os << std::setprecision(17);
    for (const Row& r : rows)
      os << r.outer_iter << ',' << r.objective << ',' << r.mse << ',' << r.inner_iters_v << ','
         << r.inner_iters_m << ',' << r.elapsed_ms << '\n';
  }
};

struct AlterMinResult {
  Beamformer m;                 // unit norm
  PhaseShiftVector v;           // unit modulus (after the final projection)
  PhaseShiftVector v_relaxed;   // before projection
  double mse_initial = 0.0;
  double mse_relaxed = 0.0;
  double mse = 0.0;             // at (m, v)
  double channel_scale = 1.0;   // composite channels were divided by this
  int outer_iterations = 0;
  bool converged = false;
  ConvergenceLog log;
};

/// Common gain normalization: sqrt(max_k ||h_{d,k}||^2 + ||G diag(h_{r,k})||_F^2).
inline double channel_scale(const ChannelRealization& ch) {
  double s2 = 0.0;
  for (Eigen::Index k = 0; k < ch.K(); ++k) {
    const double reflected = (ch.G * ch.h_reflect.col(k).asDiagonal()).squaredNorm();
    s2 = std::max(s2, ch.h_direct.col(k).squaredNorm() + reflected);
  }
  return std::sqrt(s2);
}

/// i.i.d. uniform phases e^{j theta_i}, theta_i drawn from stream `seed`.
inline PhaseShiftVector random_phases(Eigen::Index n, std::uint64_t seed) {
  const CounterRng rng = CounterRng(seed).split(0x5048415345ull);  // "PHASE"
  PhaseShiftVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform_pair_at(i, 0)[0]);
  return v;
}

/// Normalized sum of composite channels, or a random unit vector when that
/// sum vanishes or `init` asks for it.
inline Beamformer initial_beamformer(const ChannelRealization& ch, const PhaseShiftVector& v,
                                     InitKind init, std::uint64_t seed) {
  if (init == InitKind::MatchedFilter) {
    const VecC sum = composite_channels(ch, v).rowwise().sum();
    if (sum.norm() > 0.0 && std::isfinite(sum.norm())) return sum.normalized();
  }
  const CounterRng rng = CounterRng(seed).split(0x4245414Dull);  // "BEAM"
  VecC m(ch.M());
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.complex_gaussian_at(i, 0);
  return m.normalized();
}

namespace detail {
inline double mse_or_inf(const Beamformer& m, const PhaseShiftVector& v, const ChannelRealization& ch,
                         const LinkBudget& budget) {
  try {
    return mse(m, v, ch, budget.power, budget.sigma2);
  } catch (const InfeasibleChannel&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Scales x = lift(m) onto the unit sphere; never raises max_k -|m^H h_k|^2.
inline VecR to_unit_sphere(const VecR& x) {
  const double r = x.norm();
  return r > 0.0 ? VecR(x / r) : x;
}
}  // namespace detail

/// Optimizes only the beamformer for a fixed phase vector (the m half of one
/// alternation). Returns a unit-norm beamformer.
inline Beamformer optimize_beamformer(const ChannelRealization& normalized, const PhaseShiftVector& v,
                                      const Beamformer& m_start, const AlterMinSettings& settings,
                                      ScaResult* info = nullptr) {
  const LiftedMSubproblem lifted = lift_m_subproblem(v, normalized);
  ScaResult r = sca_loop_m(lift(m_start), lifted, settings);
  const Beamformer m = unlift(detail::to_unit_sphere(r.x));
  if (info) *info = std::move(r);
  return m;
}

/// Alternating minimization of max_k -|m^H h_k(v)|^2 over (v, m), each half
/// by SCA + Mirror-Prox, followed by projection of v onto unit modulus.
inline AlterMinResult altermin(const ChannelRealization& ch, const LinkBudget& budget,
                               const AlterMinSettings& settings, std::uint64_t seed) {
  settings.validate();
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); };

  AlterMinResult res;
  res.channel_scale = channel_scale(ch);
  if (!(res.channel_scale > 0.0) || !std::isfinite(res.channel_scale))
    throw InfeasibleChannel("altermin: all channels are zero");
  const ChannelRealization nch = scaled(ch, res.channel_scale);

  PhaseShiftVector v = random_phases(ch.N(), seed);
  Beamformer m = initial_beamformer(nch, v, settings.init, seed);
  auto objective = [&](const Beamformer& mm, const PhaseShiftVector& vv) {
    return -aligned_gains(mm, nch, vv).minCoeff();
  };

  double f = objective(m, v);
  res.mse_initial = detail::mse_or_inf(m, v, ch, budget);
  res.log.rows.push_back({0, f, res.mse_initial, 0, 0, elapsed_ms()});

  VecR v_lift = lift(v);
  for (int l = 1; l <= settings.max_outer; ++l) {
    const LiftedVSubproblem lv = lift_v_subproblem(m, nch);
    ScaResult rv = sca_loop_v(v_lift, lv, settings);
    v_lift = rv.x;
    v = unlift(v_lift);

    ScaResult rm;
    m = optimize_beamformer(nch, v, m, settings, &rm);

    const double f_new = objective(m, v);
    res.log.inner_v.push_back(std::move(rv.objective));
    res.log.inner_m.push_back(std::move(rm.objective));
    res.log.rows.push_back(
        {l, f_new, detail::mse_or_inf(m, v, ch, budget), rv.iterations, rm.iterations, elapsed_ms()});
    res.outer_iterations = l;
    const double decrease = f - f_new;
    f = f_new;
    if (decrease < settings.eps_outer) {
      res.converged = true;
      break;
    }
  }

  res.m = m;
  res.v_relaxed = v;
  res.v = project_unit_modulus(v_lift);
  res.mse_relaxed = detail::mse_or_inf(m, v, ch, budget);
  res.mse = mse(m, res.v, ch, budget.power, budget.sigma2);
  return res;
}

}  // namespace risac

#endif  // RISAC_ALTERMIN_HPP
