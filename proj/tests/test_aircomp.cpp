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

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace risac {
namespace {

ChannelRealization scalar_channel(Complex hd, Complex g, Complex hr) {
  ChannelRealization ch;
  ch.h_direct = MatC::Constant(1, 1, hd);
  ch.G = MatC::Constant(1, 1, g);
  ch.h_reflect = MatC::Constant(1, 1, hr);
  return ch;
}

TEST(CompositeChannel, ZeroReflectionGivesDirect) {
  CounterRng rng(1);
  const ChannelRealization ch = oracle::random_channels(3, 4, 5, rng);
  for (Eigen::Index k = 0; k < 3; ++k)
    EXPECT_EQ(composite_channel(k, ch, VecC::Zero(5)), ch.h_direct.col(k));
}

TEST(CompositeChannel, SingleElement) {
  const Complex hd(0.3, -0.1), g(1.2, 0.4), hr(-0.7, 0.9);
  const double theta = 0.8;
  const VecC v = VecC::Constant(1, std::polar(1.0, theta));
  EXPECT_LT(std::abs(composite_channel(0, scalar_channel(hd, g, hr), v)(0) - (hd + g * hr * std::polar(1.0, theta))),
            1e-15);
}

TEST(CompositeChannel, MatchesLoopOracle) {
  CounterRng rng(2);
  const ChannelRealization ch = oracle::random_channels(6, 5, 7, rng);
  const VecC v = oracle::random_unit_modulus(7, rng);
  const MatC all = composite_channels(ch, v);
  for (Eigen::Index k = 0; k < 6; ++k) {
    const VecC ref = oracle::composite(k, ch, v);
    EXPECT_LT((composite_channel(k, ch, v) - ref).norm(), 1e-12);
    EXPECT_LT((all.col(k) - ref).norm(), 1e-12);
  }
}

TEST(CompositeChannel, Affine) {
  CounterRng rng(3);
  const ChannelRealization ch = oracle::random_channels(2, 3, 4, rng);
  const VecC v1 = oracle::random_unit_modulus(4, rng), v2 = oracle::random_unit_modulus(4, rng);
  const double a = 0.3;
  const VecC lhs = composite_channel(1, ch, a * v1 + (1 - a) * v2);
  const VecC rhs = a * composite_channel(1, ch, v1) + (1 - a) * composite_channel(1, ch, v2);
  EXPECT_LT((lhs - rhs).norm(), 1e-14);
}

TEST(CompositeChannel, Errors) {
  CounterRng rng(4);
  const ChannelRealization ch = oracle::random_channels(2, 3, 4, rng);
  EXPECT_THROW(composite_channel(0, ch, VecC::Ones(3)), std::invalid_argument);
  EXPECT_THROW(composite_channel(2, ch, VecC::Ones(4)), std::out_of_range);
  EXPECT_THROW(composite_channels(ch, VecC::Ones(5)), std::invalid_argument);
}

TEST(Mse, ScalarCase) {
  const ChannelRealization ch = scalar_channel(1.0, 0.0, 0.0);
  EXPECT_NEAR(mse(VecC::Ones(1), VecC::Ones(1), ch, 1.0, 0.1), 0.1, 1e-15);
}

TEST(Mse, ScaleInvariantInBeamformer) {
  CounterRng rng(5);
  const ChannelRealization ch = oracle::random_channels(4, 3, 6, rng);
  const VecC m = oracle::random_complex(3, 1, rng), v = oracle::random_unit_modulus(6, rng);
  const double a = mse(m, v, ch, 1.0, 1e-3), b = mse(2.0 * m, v, ch, 1.0, 1e-3);
  EXPECT_NEAR(b / a, 1.0, 1e-14);
}

TEST(Mse, MatchesLoopOracle) {
  CounterRng rng(6);
  for (int t = 0; t < 20; ++t) {
    const ChannelRealization ch = oracle::random_channels(5, 4, 8, rng);
    const VecC m = oracle::random_complex(4, 1, rng), v = oracle::random_unit_modulus(8, rng);
    const double ref = oracle::mse(m, v, ch, 2.0, 1e-2);
    EXPECT_NEAR(mse(m, v, ch, 2.0, 1e-2) / ref, 1.0, 1e-12);
  }
}

TEST(Mse, OrthogonalChannelIsInfeasible) {
  ChannelRealization ch;
  ch.h_direct = MatC(2, 1);
  ch.h_direct << 0.0, 1.0;
  ch.G = MatC::Zero(2, 1);
  ch.h_reflect = MatC::Zero(1, 1);
  VecC m(2);
  m << 1.0, 0.0;
  EXPECT_THROW(mse(m, VecC::Ones(1), ch, 1.0, 1.0), InfeasibleChannel);
  EXPECT_THROW(denoising_factor(m, ch, VecC::Ones(1), 1.0), InfeasibleChannel);
  EXPECT_THROW(transmit_scalars(m, ch, VecC::Ones(1), 1.0), InfeasibleChannel);
}

TEST(DenoisingFactor, Examples) {
  EXPECT_NEAR(denoising_factor(VecC::Ones(1), scalar_channel(1.0, 0.0, 0.0), VecC::Ones(1), 2.0), 2.0, 1e-15);
  ChannelRealization two;
  two.h_direct = MatC(1, 2);
  two.h_direct << 1.0, 3.0;
  two.G = MatC::Zero(1, 1);
  two.h_reflect = MatC::Zero(1, 2);
  EXPECT_NEAR(denoising_factor(VecC::Ones(1), two, VecC::Ones(1), 1.0), 1.0, 1e-15);
}

TEST(DenoisingFactor, MatchesLoopOracle) {
  CounterRng rng(7);
  const ChannelRealization ch = oracle::random_channels(9, 3, 5, rng);
  const VecC m = oracle::random_complex(3, 1, rng), v = oracle::random_unit_modulus(5, rng);
  double worst = 1e300;
  for (Eigen::Index k = 0; k < 9; ++k) worst = std::min(worst, std::norm(oracle::inner(m, oracle::composite(k, ch, v))));
  EXPECT_NEAR(denoising_factor(m, ch, v, 1.5) / (1.5 * worst), 1.0, 1e-12);
}

TEST(TransmitScalars, ZeroForcingAndPowerBudget) {
  CounterRng rng(8);
  const double P = 0.7;
  const ChannelRealization ch = oracle::random_channels(10, 4, 6, rng);
  const VecC m = oracle::random_complex(4, 1, rng), v = oracle::random_unit_modulus(6, rng);
  const double eta = denoising_factor(m, ch, v, P);
  const VecC w = transmit_scalars(m, ch, v, eta);
  double misalign = 0.0, worst = 1e300, max_power = 0.0;
  Eigen::Index argmin = 0;
  for (Eigen::Index k = 0; k < 10; ++k) {
    const Complex p = oracle::inner(m, oracle::composite(k, ch, v));
    misalign += std::norm(p * w(k) / std::sqrt(eta) - 1.0);
    if (std::norm(p) < worst) {
      worst = std::norm(p);
      argmin = k;
    }
    max_power = std::max(max_power, std::norm(w(k)));
  }
  EXPECT_LT(misalign, 1e-12);
  EXPECT_NEAR(std::norm(w(argmin)), P, 1e-12);
  EXPECT_LE(max_power, P + 1e-12);
}

TEST(TransmitScalars, ClosedFormMatchesGeneralDistortion) {
  CounterRng rng(9);
  for (int t = 0; t < 10; ++t) {
    const ChannelRealization ch = oracle::random_channels(6, 3, 4, rng);
    const VecC m = oracle::random_complex(3, 1, rng), v = oracle::random_unit_modulus(4, rng);
    const double eta = denoising_factor(m, ch, v, 1.0);
    const double general = mse_with_scalars(m, v, ch, transmit_scalars(m, ch, v, eta), eta, 1e-2);
    EXPECT_NEAR(general / mse(m, v, ch, 1.0, 1e-2), 1.0, 1e-10);
  }
}

TEST(Lift, RoundTripAndErrors) {
  CounterRng rng(10);
  const VecC z = oracle::random_complex(5, 1, rng);
  EXPECT_EQ(unlift(lift(z)), z);
  EXPECT_THROW(unlift(VecR::Zero(3)), std::invalid_argument);
}

TEST(LiftV, ExactOnRandomPoints) {
  CounterRng rng(11);
  const ChannelRealization ch = oracle::random_channels(4, 3, 5, rng);
  const VecC m = oracle::random_complex(3, 1, rng);
  const LiftedVSubproblem sub = lift_v_subproblem(m, ch);
  for (int t = 0; t < 100; ++t) {
    const VecC v = oracle::random_complex(5, 1, rng);
    const VecR x = lift(v);
    for (Eigen::Index k = 0; k < 4; ++k) {
      // c_k + a_k^H v = m^H h_k(v)
      const double ref = -std::norm(oracle::inner(m, oracle::composite(k, ch, v)));
      EXPECT_NEAR(sub.value(k, x), ref, 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(LiftV, StructureAndZeroReflection) {
  CounterRng rng(12);
  ChannelRealization ch = oracle::random_channels(3, 2, 4, rng);
  const VecC m = oracle::random_complex(2, 1, rng);
  LiftedVSubproblem sub = lift_v_subproblem(m, ch);
  const Eigen::Index n = 4;
  for (const MatR& a : sub.A_tilde) {
    EXPECT_EQ(a, a.transpose());
    EXPECT_EQ(a.topLeftCorner(n, n), a.bottomRightCorner(n, n));
    EXPECT_EQ(a.topRightCorner(n, n), -a.bottomLeftCorner(n, n));
    EXPECT_LE(oracle::max_eigenvalue(a), 1e-12);
  }
  ch.h_reflect.col(1).setZero();
  sub = lift_v_subproblem(m, ch);
  EXPECT_TRUE(sub.A_tilde[1].isZero(0.0));
  EXPECT_TRUE(sub.b.col(1).isZero(0.0));
  const double c2 = std::norm(oracle::inner(m, ch.h_direct.col(1)));
  for (int t = 0; t < 5; ++t) EXPECT_NEAR(sub.value(1, oracle::random_real(8, 1, rng)), -c2, 1e-14);
}

TEST(LiftM, ExactOnRandomPoints) {
  CounterRng rng(13);
  const ChannelRealization ch = oracle::random_channels(4, 3, 5, rng);
  const VecC v = oracle::random_unit_modulus(5, rng);
  const LiftedMSubproblem sub = lift_m_subproblem(v, ch);
  for (int t = 0; t < 100; ++t) {
    const VecC m = oracle::random_complex(3, 1, rng);
    for (Eigen::Index k = 0; k < 4; ++k) {
      const double ref = -std::norm(oracle::inner(m, oracle::composite(k, ch, v)));
      EXPECT_NEAR(sub.value(k, lift(m)), ref, 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(LiftM, ZeroChannelAndSemidefinite) {
  CounterRng rng(14);
  ChannelRealization ch = oracle::random_channels(3, 3, 2, rng);
  ch.h_direct.col(2).setZero();
  ch.h_reflect.col(2).setZero();
  const LiftedMSubproblem sub = lift_m_subproblem(oracle::random_unit_modulus(2, rng), ch);
  EXPECT_TRUE(sub.H_tilde[2].isZero(0.0));
  for (const MatR& h : sub.H_tilde) {
    EXPECT_EQ(h, h.transpose());
    EXPECT_LE(oracle::max_eigenvalue(h), 1e-12);
  }
}

TEST(Scaled, PreservesMseUpToNoiseScaling) {
  CounterRng rng(15);
  const ChannelRealization ch = oracle::random_channels(3, 2, 4, rng);
  const VecC m = oracle::random_complex(2, 1, rng), v = oracle::random_unit_modulus(4, rng);
  const double s = 1e-4;
  // Every composite channel scales by 1/s, so the MSE scales by s^2.
  EXPECT_NEAR(mse(m, v, scaled(ch, s), 1.0, 1.0) / (s * s * mse(m, v, ch, 1.0, 1.0)), 1.0, 1e-12);
}

}  // namespace
}  // namespace risac
