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

#ifndef RISAC_AIRCOMP_HPP
#define RISAC_AIRCOMP_HPP

#include "risac/channel.hpp"
#include "risac/types.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace risac {

/// h_k(v) = h_{d,k} + G diag(h_{r,k}) v
inline VecC composite_channel(Eigen::Index k, const ChannelRealization& ch, const PhaseShiftVector& v) {
  if (k < 0 || k >= ch.K()) throw std::out_of_range("composite_channel: device index");
  if (v.size() != ch.N()) throw std::invalid_argument("composite_channel: v has wrong length");
  return ch.h_direct.col(k) + ch.G * ch.h_reflect.col(k).cwiseProduct(v);
}

/// All composite channels as the columns of an M x K matrix.
inline MatC composite_channels(const ChannelRealization& ch, const PhaseShiftVector& v) {
  if (v.size() != ch.N()) throw std::invalid_argument("composite_channels: v has wrong length");
  return ch.h_direct + ch.G * (ch.h_reflect.array().colwise() * v.array()).matrix();
}

/// |m^H h_k|^2 for every device.
inline VecR aligned_gains(const Beamformer& m, const ChannelRealization& ch, const PhaseShiftVector& v) {
  if (m.size() != ch.M()) throw std::invalid_argument("aligned_gains: m has wrong length");
  return (composite_channels(ch, v).adjoint() * m).cwiseAbs2();
}

namespace detail {
inline double min_gain(const VecR& gains) {
  const double g = gains.minCoeff();
  if (!(g >= kZeroGainFloor))
    throw InfeasibleChannel("composite channel orthogonal to the receive beamformer");
  return g;
}
}  // namespace detail

/// eta = P min_k |m^H h_k|^2
inline double denoising_factor(const Beamformer& m, const ChannelRealization& ch,
                               const PhaseShiftVector& v, double power) {
  return power * detail::min_gain(aligned_gains(m, ch, v));
}

/// Zero-forcing scalars w_k = sqrt(eta) (m^H h_k)^* / |m^H h_k|^2.
inline VecC transmit_scalars(const Beamformer& m, const ChannelRealization& ch,
                             const PhaseShiftVector& v, double eta) {
  const VecC proj = composite_channels(ch, v).adjoint() * m;  // conj(m^H h_k)
  VecC w(proj.size());
  for (Eigen::Index k = 0; k < proj.size(); ++k) {
    const double g = std::norm(proj(k));
    if (!(g >= kZeroGainFloor))
      throw InfeasibleChannel("transmit_scalars: zero composite projection");
    w(k) = std::sqrt(eta) * proj(k) / g;
  }
  return w;
}

/// sigma^2 ||m||^2 / (P min_k |m^H h_k|^2); throws InfeasibleChannel on a zero
/// denominator.
inline double mse(const Beamformer& m, const PhaseShiftVector& v, const ChannelRealization& ch,
                  double power, double sigma2) {
  return sigma2 * m.squaredNorm() / (power * detail::min_gain(aligned_gains(m, ch, v)));
}

/// General distortion for arbitrary (w, eta):
/// sum_k |m^H h_k w_k / sqrt(eta) - 1|^2 + sigma^2 ||m||^2 / eta.
inline double mse_with_scalars(const Beamformer& m, const PhaseShiftVector& v,
                               const ChannelRealization& ch, const VecC& w, double eta,
                               double sigma2) {
  const VecC proj = composite_channels(ch, v).adjoint() * m;
  double misalign = 0.0;
  for (Eigen::Index k = 0; k < proj.size(); ++k)
    misalign += std::norm(std::conj(proj(k)) * w(k) / std::sqrt(eta) - 1.0);
  return misalign + sigma2 * m.squaredNorm() / eta;
}

inline double mse_db(double linear) { return 10.0 * std::log10(linear); }

/// Real-domain data of the phase subproblem for fixed m:
/// f_k(x) = x^T A_k x - 2 x^T b_k - |c_k|^2 = -|c_k + a_k^H v|^2 with x = lift(v).
struct LiftedVSubproblem {
  std::vector<MatR> A_tilde;  // K matrices, 2N x 2N
  MatR b;                     // 2N x K
  VecR c_abs2;                // K

  Eigen::Index K() const { return c_abs2.size(); }
  Eigen::Index dim() const { return b.rows(); }

  double value(Eigen::Index k, const VecR& x) const {
    return x.dot(A_tilde[k] * x) - 2.0 * x.dot(b.col(k)) - c_abs2(k);
  }
  VecR values(const VecR& x) const {
    VecR out(K());
    for (Eigen::Index k = 0; k < K(); ++k) out(k) = value(k, x);
    return out;
  }
  double objective(const VecR& x) const { return values(x).maxCoeff(); }
};

/// Real-domain data of the beamformer subproblem for fixed v:
/// f_k(x) = x^T H_k x = -|m^H h_k|^2 with x = lift(m).
struct LiftedMSubproblem {
  std::vector<MatR> H_tilde;  // K matrices, 2M x 2M

  Eigen::Index K() const { return static_cast<Eigen::Index>(H_tilde.size()); }
  Eigen::Index dim() const { return H_tilde.empty() ? 0 : H_tilde.front().rows(); }

  double value(Eigen::Index k, const VecR& x) const { return x.dot(H_tilde[k] * x); }
  VecR values(const VecR& x) const {
    VecR out(K());
    for (Eigen::Index k = 0; k < K(); ++k) out(k) = value(k, x);
    return out;
  }
  double objective(const VecR& x) const { return values(x).maxCoeff(); }
};

inline LiftedVSubproblem lift_v_subproblem(const Beamformer& m, const ChannelRealization& ch) {
  if (m.size() != ch.M()) throw std::invalid_argument("lift_v_subproblem: m has wrong length");
  const Eigen::Index K = ch.K(), N = ch.N();
  const VecC mG = ch.G.adjoint() * m;          // conj(m^H G)^T
  const VecC c = ch.h_direct.adjoint() * m;    // conj(c_k)
  LiftedVSubproblem out;
  out.A_tilde.reserve(K);
  out.b.resize(2 * N, K);
  out.c_abs2 = c.cwiseAbs2();
  for (Eigen::Index k = 0; k < K; ++k) {
    // a_k = (m^H G diag(h_{r,k}))^H = diag(conj(h_{r,k})) G^H m
    const VecC a = ch.h_reflect.col(k).conjugate().cwiseProduct(mG);
    out.A_tilde.push_back(lift_matrix(-(a * a.adjoint())));
    out.b.col(k) = lift(std::conj(c(k)) * a);
  }
  return out;
}

inline LiftedMSubproblem lift_m_subproblem(const PhaseShiftVector& v, const ChannelRealization& ch) {
  const MatC h = composite_channels(ch, v);
  LiftedMSubproblem out;
  out.H_tilde.reserve(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k)
    out.H_tilde.push_back(lift_matrix(-(h.col(k) * h.col(k).adjoint())));
  return out;
}

/// Copy of `ch` with every link divided by `scale` (squared gains by scale^2).
inline ChannelRealization scaled(const ChannelRealization& ch, double scale) {
  ChannelRealization out = ch;
  out.h_direct /= scale;
  out.h_reflect /= std::sqrt(scale);
  out.G /= std::sqrt(scale);
  return out;
}

}  // namespace risac

#endif  // RISAC_AIRCOMP_HPP
