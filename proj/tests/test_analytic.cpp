#include "flexsat/analytic.hpp"

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace flexsat {
namespace {

using analytic::alpha;
using cd = std::complex<double>;
const PhysicalParams<double> kDefaults{};

TEST(Alpha, ZeroFrequency) { EXPECT_EQ(alpha(0.0, kDefaults), cd(0, 0)); }

TEST(Alpha, UnitFrequency) {
  // Principal fourth root of 1 - 5i in polar form.
  const double r = std::pow(std::hypot(1.0, 5.0), 0.25);
  const double phi = std::atan2(-5.0, 1.0) / 4.0;
  const cd expected = std::polar(r, phi);
  EXPECT_NEAR(std::abs(alpha(1.0, kDefaults) - expected), 0.0, 1e-14);
  EXPECT_NEAR(alpha(1.0, kDefaults).real(), 1.4150, 5e-5);
  EXPECT_NEAR(alpha(1.0, kDefaults).imag(), -0.5059, 5e-5);
}

TEST(Alpha, ConjugateSymmetry) {
  for (double w : {0.3, 1.0, 7.0, 250.0})
    EXPECT_NEAR(std::abs(alpha(-w, kDefaults) - std::conj(alpha(w, kDefaults))), 0.0, 1e-13);
}

TEST(Alpha, FourthPowerRecoversArgument) {
  const double w = 3.7;
  const cd a = alpha(w, kDefaults);
  EXPECT_NEAR(std::abs(std::pow(a, 4) - cd(w * w, -5.0 * w)), 0.0, 1e-12);
  EXPECT_GT(a.real(), 0.0);
}

TEST(BeamMu, MatchesBisection) {
  EXPECT_NEAR(analytic::beam_mu<double>(1), 1.8751040687, 1e-10);
  EXPECT_NEAR(analytic::beam_mu<double>(2), 4.6940911330, 1e-10);
  for (int k = 1; k <= 8; ++k) EXPECT_NEAR(analytic::beam_mu<double>(k), oracle::beam_root(k), 1e-10);
}

TEST(BeamMu, Residual) {
  for (int k = 1; k <= 12; ++k) {
    const double mu = analytic::beam_mu<double>(k);
    EXPECT_LT(std::abs(std::cos(mu) + 1.0 / std::cosh(mu)), 1e-12) << "k=" << k;
    if (k <= 2) EXPECT_LT(std::abs(std::cosh(mu) * std::cos(mu) + 1.0), 1e-12);
  }
}

TEST(BeamMu, InterlacingAndAsymptotics) {
  double prev_gap = INFINITY;
  for (int k = 1; k <= 8; ++k) {
    const double mu = analytic::beam_mu<double>(k);
    EXPECT_GT(mu, M_PI * (k - 1));
    EXPECT_LT(mu, M_PI * k);
    const double gap = std::abs(mu - M_PI * (k - 0.5));
    if (k >= 2) EXPECT_LT(gap, prev_gap) << "k=" << k;
    prev_gap = gap;
  }
  const double d = analytic::beam_mu<double>(9) - analytic::beam_mu<double>(8);
  EXPECT_NEAR(d, M_PI, 1e-6);
  EXPECT_THROW(analytic::beam_mu<double>(0), std::invalid_argument);
}

TEST(BeamEigenfunction, ClampedAtHub) {
  for (int k = 1; k <= 6; ++k) {
    const analytic::BeamMode<double> mode(k, kDefaults);
    EXPECT_NEAR(std::abs(mode.evaluate(0.0, 0).first), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(mode.evaluate(0.0, 1).first), 0.0, 1e-11);
  }
}

TEST(BeamEigenfunction, FreeEndAndEigenOde) {
  PhysicalParams<double> p;
  p.rho = 1.7;
  p.E = 2.3;
  for (int k = 1; k <= 5; ++k) {
    const analytic::BeamMode<double> mode(k, p);
    const double lambda = mode.eigenpair().lambda;
    EXPECT_NEAR(lambda, std::sqrt(p.EI() / p.rho_a()) * std::pow(mode.eigenpair().mu, 2), 1e-12);
    const auto at_end = mode.evaluate(1.0, 0);
    const auto dend = mode.evaluate(1.0, 1);
    EXPECT_LT(std::abs(at_end.second), 1e-10);
    EXPECT_LT(std::abs(dend.second), 1e-9 * lambda);
    for (int i = 0; i <= 100; ++i) {
      const double xi = i / 100.0;
      const auto v = mode.evaluate(xi, 0);
      const auto d2 = mode.evaluate(xi, 2);
      const cd il(0, lambda);
      EXPECT_LT(std::abs(-p.EI() * d2.second - il * v.first), 1e-8 * lambda);
      EXPECT_LT(std::abs(d2.first / p.rho_a() - il * v.second), 1e-8 * lambda);
    }
  }
}

TEST(BeamEigenfunction, DerivativesMatchFiniteDifferences) {
  const analytic::BeamMode<double> mode(3, kDefaults);
  const double h = 1e-5;
  for (double xi : {0.2, 0.55, 0.9}) {
    const cd fd = (mode.evaluate(xi + h).first - mode.evaluate(xi - h).first) / (2 * h);
    EXPECT_NEAR(std::abs(fd - mode.evaluate(xi, 1).first), 0.0, 1e-6);
  }
}

TEST(BeamEigenfunction, UnitEnergyNorm) {
  for (int k = 1; k <= 5; ++k) {
    const analytic::BeamMode<double> mode(k, kDefaults);
    const double norm2 = oracle::simpson(
        [&](double xi) {
          const auto v = mode.evaluate(xi);
          return std::norm(v.first) / kDefaults.rho_a() + kDefaults.EI() * std::norm(v.second);
        },
        0.0, 1.0, 4000);
    EXPECT_NEAR(norm2, 1.0, 1e-10) << "k=" << k;
  }
}

TEST(BeamEigenfunction, NoOverflowForHighModes) {
  const analytic::BeamMode<double> mode(40, kDefaults);
  for (double xi : {0.0, 0.5, 0.99, 1.0}) {
    const auto v = mode.evaluate(xi, 2);
    EXPECT_TRUE(std::isfinite(std::abs(v.first)) && std::isfinite(std::abs(v.second)));
  }
}

TEST(TransferBeam, ZeroFrequency) {
  const auto pb = analytic::transfer_beam(0.0, kDefaults);
  EXPECT_NEAR(std::abs(pb(0, 0) - 10.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pb(1, 1) - 10.0 / 3.0), 0.0, 1e-14);
  EXPECT_EQ(pb(0, 1), cd(0, 0));
}

TEST(TransferBeam, MatchesBoundaryValueSolve) {
  PhysicalParams<double> p;
  p.gamma = 1.3;
  p.rho = 0.8;
  for (double w : {0.5, 1.0, 2.0, 5.0, -3.0, 20.0}) {
    const auto pb = analytic::transfer_beam(w, p);
    const auto ref = oracle::beam_reaction_bvp(w, p);
    EXPECT_LT((pb - ref).norm() / ref.norm(), 1e-9) << "omega=" << w;
    EXPECT_EQ(pb(0, 1), cd(0, 0));
    EXPECT_EQ(pb(1, 0), cd(0, 0));
  }
}

TEST(TransferBeam, ContinuityAtZeroSwitch) {
  const auto at0 = analytic::transfer_beam(0.0, kDefaults);
  for (double w : {2e-8, -2e-8, 1e-7}) EXPECT_LT((analytic::transfer_beam(w, kDefaults) - at0).norm(), 1e-6);
}

TEST(TransferBeam, FiniteForHugeFrequencies) {
  for (double w : {1e5, 5e5, 1e6, -1e6}) {
    const auto pb = analytic::transfer_beam(w, kDefaults);
    EXPECT_TRUE(pb.allFinite()) << "omega=" << w;
  }
}

TEST(TransferBeam, PassiveAndConjugateSymmetric) {
  for (double w = -40; w <= 40; w += 0.7) {
    const auto pb = analytic::transfer_beam(w, kDefaults);
    const Eigen::Matrix2cd herm = (pb + pb.adjoint()) / 2.0;
    EXPECT_GT(herm(0, 0).real(), 0);
    EXPECT_GT(herm(1, 1).real(), 0);
    EXPECT_LT((analytic::transfer_beam(-w, kDefaults) - pb.conjugate()).norm(), 1e-10 * pb.norm());
  }
}

TEST(TransferRigid, Values) {
  const auto p1 = analytic::transfer_rigid(1.0, kDefaults);
  EXPECT_NEAR(std::abs(p1(0, 0) - cd(0, -1)), 0, 1e-15);
  EXPECT_NEAR(std::abs(p1(1, 1) - cd(0, -1)), 0, 1e-15);
  const auto p2 = analytic::transfer_rigid(2.0, kDefaults);
  EXPECT_NEAR(std::abs(p2(0, 0) - cd(0, -0.5)), 0, 1e-15);
  for (double w : {-3.0, 0.1, 9.0}) {
    const auto pc = analytic::transfer_rigid(w, kDefaults);
    EXPECT_EQ(((pc + pc.adjoint()) / 2.0).norm(), 0.0);
  }
  EXPECT_THROW(analytic::transfer_rigid(0.0, kDefaults), std::domain_error);
}

TEST(SMatrix, ZeroFrequency) {
  const auto s = analytic::s_matrix(0.0, kDefaults);
  EXPECT_NEAR(std::abs(s(0, 0) - 0.1), 0, 1e-15);
  EXPECT_NEAR(std::abs(s(1, 1) - 0.3), 0, 1e-15);
}

TEST(SMatrix, MatchesBruteForceInversion) {
  const auto bc = analytic::hub_input(kDefaults);
  const cd iw(0, 5.0);
  const Eigen::Matrix2cd direct =
      iw * Eigen::Matrix2cd::Identity() + bc * oracle::beam_reaction_bvp(5.0, kDefaults);
  const auto ref = oracle::invert_2x2(direct);
  EXPECT_LT((analytic::s_matrix(5.0, kDefaults) - ref).norm(), 1e-10 * ref.norm());
}

TEST(SMatrix, DefiningIdentityAtRandomFrequencies) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-200, 200);
  PhysicalParams<double> p;
  p.m = 2.5;
  p.I_m = 0.7;
  const auto bc = analytic::hub_input(p);
  for (int i = 0; i < 1000; ++i) {
    const double w = dist(rng);
    const auto s = analytic::s_matrix(w, p);
    const Eigen::Matrix2cd lhs =
        s * (cd(0, w) * Eigen::Matrix2cd::Identity() + bc * analytic::transfer_beam(w, p));
    ASSERT_LT((lhs - Eigen::Matrix2cd::Identity()).norm(), 1e-12) << "omega=" << w;
  }
}

TEST(PlantTransfer, ZeroFrequencyAndNonsingular) {
  const auto p0 = analytic::plant_transfer(0.0, kDefaults);
  EXPECT_NEAR(std::abs(p0(0, 0) - 0.1), 0, 1e-15);
  EXPECT_NEAR(std::abs(p0(1, 1) - 0.3), 0, 1e-15);
  for (double w : {0.0, 1.0, 2.0, 5.0}) {
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(analytic::plant_transfer(w, kDefaults));
    EXPECT_GT(svd.singularValues()(1), 1e-3);
  }
}

TEST(PlantTransfer, ConjugateSymmetry) {
  for (double w = 0.25; w < 30; w *= 1.6) {
    const auto a = analytic::plant_transfer(w, kDefaults);
    EXPECT_LT((analytic::plant_transfer(-w, kDefaults) - a.conjugate()).norm(), 1e-12 * a.norm());
  }
}

TEST(Interconnection, DiagonalBoundedAwayFromZero) {
  for (double w = 1.0; w <= 1e4; w *= 1.1) {
    const auto q = analytic::interconnection_matrix(w, kDefaults);
    EXPECT_GT(std::abs(q(0, 0)), 0.1);
    EXPECT_GT(std::abs(q(1, 1)), 0.1);
  }
}

}  // namespace
}  // namespace flexsat
