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

#ifndef RISAC_CHANNEL_HPP
#define RISAC_CHANNEL_HPP

#include "risac/rng.hpp"
#include "risac/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace risac {

struct Geometry {
  Vec3 ap{0.0, 0.0, 20.0};
  Vec3 ris{100.0, 0.0, 20.0};
  Vec3 device_center{100.0, 20.0, 0.0};
  double device_radius = 20.0;
};

// Far-field array layout. The AP is a ULA along `ap_axis`; the RIS is a UPA
// spanned by (ris_axis_u, ris_axis_v) with `ris_columns` elements per row, so
// element i sits at (i % cols, i / cols). Spacing is in wavelengths.
struct ArrayLayout {
  Vec3 ap_axis{0.0, 1.0, 0.0};
  Vec3 ris_axis_u{0.0, 1.0, 0.0};
  Vec3 ris_axis_v{0.0, 0.0, 1.0};
  int ris_columns = 10;
  double spacing = 0.5;
};

struct SystemConfig {
  int K = 200;  // devices
  int M = 20;   // AP antennas
  int N = 50;   // RIS elements
  double power = 1.0;     // W (30 dBm)
  double sigma2 = 1e-12;  // W (-90 dBm)
  double t0 = 1e-3;       // path loss at 1 m (-30 dB)
  double alpha_direct = 3.8;
  double alpha_device_ris = 2.5;
  double alpha_ris_ap = 2.2;
  double rician_beta = 3.0;
  Geometry geometry;
  ArrayLayout arrays;

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("SystemConfig: ") + what);
    };
    require(K >= 1 && M >= 1 && N >= 1, "K, M, N must be >= 1");
    require(power > 0.0, "power must be > 0");
    require(sigma2 > 0.0, "sigma2 must be > 0");
    require(t0 > 0.0, "t0 must be > 0");
    require(alpha_direct > 0.0 && alpha_device_ris > 0.0 && alpha_ris_ap > 0.0,
            "path-loss exponents must be > 0");
    require(rician_beta >= 0.0, "rician_beta must be >= 0");
    require(geometry.device_radius >= 0.0, "device radius must be >= 0");
    require(arrays.ris_columns >= 1, "ris_columns must be >= 1");
    require(arrays.spacing > 0.0, "element spacing must be > 0");
  }
};

/// One draw of every link. Column k of h_direct / h_reflect belongs to device k.
struct ChannelRealization {
  MatC h_direct;   // M x K, device -> AP
  MatC G;          // M x N, RIS -> AP
  MatC h_reflect;  // N x K, device -> RIS
  std::vector<Vec3> devices;

  Eigen::Index K() const { return h_direct.cols(); }
  Eigen::Index M() const { return h_direct.rows(); }
  Eigen::Index N() const { return G.cols(); }
};

inline constexpr double kReferenceDistance = 1.0;

/// Large-scale gain t0 * (d / 1 m)^(-alpha).
inline double path_loss(double distance, double alpha, double t0) {
  if (!(distance >= kReferenceDistance))
    throw std::domain_error("path_loss: distance below the 1 m reference distance");
  if (alpha < 0.0) throw std::domain_error("path_loss: negative exponent");
  if (!(t0 > 0.0)) throw std::domain_error("path_loss: t0 must be positive");
  return t0 * std::pow(distance / kReferenceDistance, -alpha);
}

/// sqrt(beta/(1+beta)) * los + sqrt(1/(1+beta)) * nlos, with nlos(r, c) the
/// CN(0, 1) sample of `rng` at index (r, c).
inline MatC sample_rician(Eigen::Index rows, Eigen::Index cols, double beta, const MatC& los,
                          const CounterRng& rng) {
  if (beta < 0.0) throw std::domain_error("sample_rician: negative Rician factor");
  if (los.rows() != rows || los.cols() != cols)
    throw std::invalid_argument("sample_rician: LoS matrix has the wrong shape");
  const double w_los = std::sqrt(beta / (1.0 + beta));
  const double w_nlos = std::sqrt(1.0 / (1.0 + beta));
  MatC out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r)
      out(r, c) = w_los * los(r, c) + w_nlos * rng.complex_gaussian_at(r, c);
  return out;
}

inline MatC sample_rayleigh(Eigen::Index rows, Eigen::Index cols, const CounterRng& rng) {
  MatC out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = rng.complex_gaussian_at(r, c);
  return out;
}

/// ULA response exp(j 2 pi s i <axis, u>) for unit direction u.
inline VecC ula_steering(Eigen::Index count, const Vec3& direction, const Vec3& axis, double spacing) {
  const double phase = 2.0 * std::numbers::pi * spacing * axis.dot(direction.normalized());
  VecC out(count);
  for (Eigen::Index i = 0; i < count; ++i) out(i) = std::polar(1.0, phase * static_cast<double>(i));
  return out;
}

/// UPA response with element i at grid position (i % columns, i / columns).
inline VecC upa_steering(Eigen::Index count, const Vec3& direction, const ArrayLayout& layout) {
  const Vec3 u = direction.normalized();
  const double pu = 2.0 * std::numbers::pi * layout.spacing * layout.ris_axis_u.dot(u);
  const double pv = 2.0 * std::numbers::pi * layout.spacing * layout.ris_axis_v.dot(u);
  VecC out(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto col = static_cast<double>(i % layout.ris_columns);
    const auto row = static_cast<double>(i / layout.ris_columns);
    out(i) = std::polar(1.0, pu * col + pv * row);
  }
  return out;
}

namespace detail {
enum Stream : std::uint64_t { kDevices = 1, kDirect = 2, kRisAp = 3, kDeviceRis = 4 };
}  // namespace detail

/// Device k's position, uniform over the horizontal disk of the geometry.
inline Vec3 sample_device(const Geometry& geo, const CounterRng& rng, std::uint64_t k) {
  const auto [u1, u2] = rng.uniform_pair_at(k, 0);
  const double r = geo.device_radius * std::sqrt(u1);
  const double phi = 2.0 * std::numbers::pi * u2;
  return geo.device_center + Vec3(r * std::cos(phi), r * std::sin(phi), 0.0);
}

/// Draws all links for `config`. Every sample is addressed by (link, element,
/// device) index, so the realization for a smaller K, M or N is the leading
/// block of a larger one under the same seed.
inline ChannelRealization generate_scenario(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const CounterRng root(seed);
  const CounterRng dev_rng = root.split(detail::kDevices);
  const CounterRng direct_rng = root.split(detail::kDirect);
  const CounterRng ris_ap_rng = root.split(detail::kRisAp);
  const CounterRng dev_ris_rng = root.split(detail::kDeviceRis);
  const Geometry& geo = config.geometry;
  const ArrayLayout& arr = config.arrays;

  ChannelRealization ch;
  ch.devices.reserve(config.K);
  for (int k = 0; k < config.K; ++k) ch.devices.push_back(sample_device(geo, dev_rng, k));

  // RIS -> AP
  const Vec3 ap_to_ris = geo.ris - geo.ap;
  const double d_ra = ap_to_ris.norm();
  const MatC g_los = ula_steering(config.M, ap_to_ris, arr.ap_axis, arr.spacing) *
                     upa_steering(config.N, -ap_to_ris, arr).transpose();
  ch.G = std::sqrt(path_loss(d_ra, config.alpha_ris_ap, config.t0)) *
         sample_rician(config.M, config.N, config.rician_beta, g_los, ris_ap_rng);

  ch.h_direct = sample_rayleigh(config.M, config.K, direct_rng);
  MatC h_r_los(config.N, config.K);
  VecC gain_dr(config.K);
  for (int k = 0; k < config.K; ++k) {
    const Vec3& p = ch.devices[k];
    ch.h_direct.col(k) *= std::sqrt(path_loss((p - geo.ap).norm(), config.alpha_direct, config.t0));
    h_r_los.col(k) = upa_steering(config.N, p - geo.ris, arr);
    gain_dr(k) = std::sqrt(path_loss((p - geo.ris).norm(), config.alpha_device_ris, config.t0));
  }
  ch.h_reflect = sample_rician(config.N, config.K, config.rician_beta, h_r_los, dev_ris_rng) *
                 gain_dr.asDiagonal();
  return ch;
}

}  // namespace risac

#endif  // RISAC_CHANNEL_HPP
