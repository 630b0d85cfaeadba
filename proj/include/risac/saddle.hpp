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

#ifndef RISAC_SADDLE_HPP
#define RISAC_SADDLE_HPP

#include "risac/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace risac {

// Primal feasible sets. DiskProduct: {x in R^{2N} : x_i^2 + x_{N+i}^2 <= 1};
// UnitBall: {x : ||x|| <= 1}.
enum class DomainKind { DiskProduct, UnitBall };

/// Data of min_{x in domain} max_k (p_k^T x + q_k), or equivalently of the
/// saddle function (P x + q)^T y over domain x simplex.
struct SurrogateData {
  MatR P;  // K x D, row k is p_k
  VecR q;  // K
  DomainKind domain = DomainKind::UnitBall;

  Eigen::Index K() const { return P.rows(); }
  Eigen::Index D() const { return P.cols(); }

  void validate() const {
    if (q.size() != P.rows()) throw std::invalid_argument("SurrogateData: q length != rows of P");
    if (P.rows() < 1) throw std::invalid_argument("SurrogateData: empty P");
    if (domain == DomainKind::DiskProduct && P.cols() % 2 != 0)
      throw std::invalid_argument("SurrogateData: disk domain needs an even dimension");
    if (!P.allFinite() || !q.allFinite()) throw std::invalid_argument("SurrogateData: non-finite entry");
  }
};

/// Primal-dual iterate z = (x, y).
struct SaddlePoint {
  VecR x;
  VecR y;
};

/// Raised by mirror_step when the update leaves the finite range.
class StepFailure : public std::runtime_error {
 public:
  StepFailure() : std::runtime_error("mirror step produced a non-finite iterate") {}
};

/// F(z) = [P^T y; -(P x + q)]
inline VecR operator_F(const SaddlePoint& z, const SurrogateData& data) {
  VecR out(data.D() + data.K());
  out.head(data.D()).noalias() = data.P.transpose() * z.y;
  out.tail(data.K()).noalias() = -(data.P * z.x);
  out.tail(data.K()) -= data.q;
  return out;
}

/// max_k ||p_k||
inline double lipschitz_const(const SurrogateData& data) {
  return data.P.rowwise().norm().maxCoeff();
}

inline double primal_value(const SurrogateData& data, const VecR& x) {
  return (data.P * x + data.q).maxCoeff();
}

/// min_{x in domain} (P^T y)^T x + q^T y, in closed form for both domains.
inline double dual_value(const SurrogateData& data, const VecR& y) {
  const VecR g = data.P.transpose() * y;
  double support = 0.0;
  if (data.domain == DomainKind::UnitBall) {
    support = g.norm();
  } else {
    const Eigen::Index n = g.size() / 2;
    support = (g.head(n).cwiseAbs2() + g.tail(n).cwiseAbs2()).cwiseSqrt().sum();
  }
  return data.q.dot(y) - support;
}

inline double duality_gap(const SurrogateData& data, const SaddlePoint& z) {
  return primal_value(data, z.x) - dual_value(data, z.y);
}

/// D(z, z_ref) = 1/2 ||x - x_ref||^2 + sum y log(y / y_ref) - sum (y - y_ref),
/// with 0 log 0 = 0.
inline double bregman(const SaddlePoint& z, const SaddlePoint& ref) {
  if (z.x.size() != ref.x.size() || z.y.size() != ref.y.size())
    throw std::invalid_argument("bregman: dimension mismatch");
  double d = 0.5 * (z.x - ref.x).squaredNorm();
  for (Eigen::Index k = 0; k < z.y.size(); ++k) {
    const double y = z.y(k), r = ref.y(k);
    if (y > 0.0) {
      if (!(r > 0.0)) throw std::domain_error("bregman: reference dual entry must be positive");
      d += y * std::log(y / r);
    }
    d -= y - r;
  }
  return d;
}

/// Scales each pair (u_i, u_{N+i}) whose norm exceeds one back onto the unit circle.
inline VecR project_disks(const VecR& u) {
  if (u.size() % 2 != 0) throw std::invalid_argument("project_disks: odd dimension");
  const Eigen::Index n = u.size() / 2;
  VecR out = u;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::hypot(u(i), u(n + i));
    if (r > 1.0) {
      out(i) = u(i) / r;
      out(n + i) = u(n + i) / r;
    }
  }
  return out;
}

inline VecR project_ball(const VecR& u) {
  const double r = u.norm();
  return r > 1.0 ? VecR(u / r) : u;
}

inline VecR project_primal(DomainKind kind, const VecR& u) {
  return kind == DomainKind::UnitBall ? project_ball(u) : project_disks(u);
}

/// Entropic projection onto the simplex: e if it already sums to one, else e / ||e||_1.
inline VecR project_simplex(const VecR& e) {
  if (e.size() == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!(e.minCoeff() > 0.0)) throw std::domain_error("project_simplex: entries must be positive");
  const double s = e.sum();
  if (s == 1.0) return e;
  return e / s;
}

// Lower clamp on log-weights relative to the largest one; keeps every dual
// entry a positive normal double (exp(-700) ~ 1e-304).
inline constexpr double kLogWeightFloor = -700.0;

/// One mirror step from z along `direction` = [d_x; d_y]: the identity map on
/// x and the exponential map on y, followed by the Bregman projection onto
/// domain x simplex. The y-update is carried out in log space with the max
/// exponent subtracted before exponentiation.
inline SaddlePoint mirror_step(const SaddlePoint& z, const VecR& direction, double gamma,
                               DomainKind kind) {
  const Eigen::Index d = z.x.size(), k = z.y.size();
  if (direction.size() != d + k) throw std::invalid_argument("mirror_step: direction length");
  SaddlePoint out;
  out.x = project_primal(kind, z.x - gamma * direction.head(d));
  VecR logw = z.y.array().log().matrix() - gamma * direction.tail(k);
  const double top = logw.maxCoeff();
  if (!std::isfinite(top) || !out.x.allFinite()) throw StepFailure();
  logw.array() = (logw.array() - top).max(kLogWeightFloor);
  out.y = project_simplex(logw.array().exp().matrix());
  return out;
}

struct SaddleOptions {
  double eps = 1e-5;
  int max_iter = 100000;
  std::ostream* trace = nullptr;  // CSV rows: iteration,primal_value,bregman_step
};

struct SaddleResult {
  VecR x;               // returned primal solution
  SaddlePoint average;  // ergodic average (1/T) sum_{t=1..T} z_t
  SaddlePoint last;     // z_T
  int iterations = 0;
  bool converged = false;
  double last_step = 0.0;  // D(z_{T-1}, z_T)
  double gamma = 0.0;
  bool used_average = true;
};

inline void write_trace_header(std::ostream& os) { os << "iteration,primal_value,bregman_step\n"; }

/// Mirror-Prox (extragradient in the Euclidean x entropy geometry) for
/// min_{x in domain} max_{y in simplex} (P x + q)^T y, step 1/(2L).
///
/// Stops once D(z_t, z_{t+1}) < eps or after max_iter iterations. The
/// returned primal point is whichever of the ergodic average and the final
/// iterate has the smaller max_k (p_k^T x + q_k); both are reported.
inline SaddleResult solve_saddle(const SurrogateData& data, SaddlePoint z, const SaddleOptions& opts) {
  data.validate();
  if (z.x.size() != data.D() || z.y.size() != data.K())
    throw std::invalid_argument("solve_saddle: start point has the wrong dimensions");
  if (!(z.y.minCoeff() > 0.0))
    throw std::invalid_argument("solve_saddle: start dual must be strictly positive");
  z.x = project_primal(data.domain, z.x);
  z.y /= z.y.sum();

  SaddleResult res;
  const double L = lipschitz_const(data);
  if (L == 0.0) {
    res.x = z.x;
    res.average = z;
    res.last = z;
    res.converged = true;
    return res;
  }
  double gamma = 1.0 / (2.0 * L);
  VecR sum_x = VecR::Zero(data.D());
  VecR sum_y = VecR::Zero(data.K());
  int t = 0;
  while (t < opts.max_iter) {
    SaddlePoint next;
    try {
      const SaddlePoint mid = mirror_step(z, operator_F(z, data), gamma, data.domain);
      next = mirror_step(z, operator_F(mid, data), gamma, data.domain);
    } catch (const StepFailure&) {
      gamma *= 0.5;
      if (gamma < 1e-300) throw;
      continue;
    }
    ++t;
    res.last_step = bregman(z, next);
    sum_x += next.x;
    sum_y += next.y;
    z = std::move(next);
    if (opts.trace)
      *opts.trace << t << ',' << primal_value(data, z.x) << ',' << res.last_step << '\n';
    if (res.last_step < opts.eps) {
      res.converged = true;
      break;
    }
  }
  res.iterations = t;
  res.gamma = gamma;
  res.last = z;
  if (t == 0) {
    res.average = z;
  } else {
    res.average.x = sum_x / t;
    res.average.y = sum_y / t;
  }
  res.used_average = primal_value(data, res.average.x) <= primal_value(data, res.last.x);
  res.x = res.used_average ? res.average.x : res.last.x;
  return res;
}

/// Start point with uniform dual weights.
inline SaddlePoint warm_start(const SurrogateData& data, const VecR& x0) {
  return {project_primal(data.domain, x0), VecR::Constant(data.K(), 1.0 / static_cast<double>(data.K()))};
}

inline double domain_diameter(const SurrogateData& data) {
  return data.domain == DomainKind::UnitBall ? 2.0 : 2.0 * std::sqrt(static_cast<double>(data.D() / 2));
}

/// Projected subgradient descent on max_k (p_k^T x + q_k), step
/// step_scale * diam / (L sqrt(t)),
/// returning the best iterate seen. Validation oracle only.
inline VecR subgradient_oracle(const SurrogateData& data, const VecR& x0, long iters,
                               double step_scale = 0.1) {
  data.validate();
  VecR x = project_primal(data.domain, x0);
  const double L = lipschitz_const(data);
  if (L == 0.0) return x;
  VecR best = x;
  VecR values = data.P * x + data.q;
  double best_value = values.maxCoeff();
  const double c = step_scale * domain_diameter(data) / L;
  for (long t = 1; t <= iters; ++t) {
    Eigen::Index k = 0;
    values.maxCoeff(&k);
    x = project_primal(data.domain, x - (c / std::sqrt(static_cast<double>(t))) * data.P.row(k).transpose());
    values.noalias() = data.P * x;
    values += data.q;
    const double f = values.maxCoeff();
    if (f < best_value) {
      best_value = f;
      best = x;
    }
  }
  return best;
}

}  // namespace risac

#endif  // RISAC_SADDLE_HPP
