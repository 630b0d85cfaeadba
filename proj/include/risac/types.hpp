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

#ifndef RISAC_TYPES_HPP
#define RISAC_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace risac {

using Complex = std::complex<double>;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

// Receive beamformer m (length M) and RIS phase vector v (length N).
using Beamformer = VecC;
using PhaseShiftVector = VecC;

// Raised when some device's composite channel is (numerically) orthogonal to
// the receive beamformer, so the MSE has a zero denominator.
class InfeasibleChannel : public std::runtime_error {
 public:
  explicit InfeasibleChannel(const std::string& what) : std::runtime_error(what) {}
};

// Below this value min_k |m^H h_k|^2 is treated as zero.
inline constexpr double kZeroGainFloor = 1e-30;

// [Re(z); Im(z)]
inline VecR lift(const VecC& z) {
  VecR out(2 * z.size());
  out.head(z.size()) = z.real();
  out.tail(z.size()) = z.imag();
  return out;
}

inline VecC unlift(const VecR& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("unlift: odd-length real vector");
  const Eigen::Index n = x.size() / 2;
  VecC out(n);
  out.real() = x.head(n);
  out.imag() = x.tail(n);
  return out;
}

// Real representation [Re C, -Im C; Im C, Re C] of a complex matrix; for
// Hermitian C and z = x + jy, z^H C z = [x; y]^T lift(C) [x; y].
inline MatR lift_matrix(const MatC& c) {
  const Eigen::Index r = c.rows(), k = c.cols();
  MatR out(2 * r, 2 * k);
  out.topLeftCorner(r, k) = c.real();
  out.topRightCorner(r, k) = -c.imag();
  out.bottomLeftCorner(r, k) = c.imag();
  out.bottomRightCorner(r, k) = c.real();
  return out;
}

}  // namespace risac

#endif  // RISAC_TYPES_HPP
