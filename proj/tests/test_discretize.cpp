#include "flexsat/discretize.hpp"

#include <gtest/gtest.h>

#include "flexsat/analytic.hpp"
#include "oracles.hpp"

namespace flexsat {
namespace {

const PhysicalParams<double> kDefaults{};

TEST(Legendre, GaussRuleIntegratesPolynomialsExactly) {
  const auto rule = legendre::gauss_legendre<double>(6, 0.0, 1.0);
  for (int k = 0; k <= 11; ++k) {
    double s = 0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights(i) * std::pow(rule.nodes(i), k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15) << "k=" << k;
  }
}

TEST(BeamBasis, ClampedAtHub) {
  for (Side side : {Side::Left, Side::Right}) {
    const BeamBasis<double> b(8, side);
    EXPECT_LT(b.evaluate(0.0, 0).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(b.evaluate(0.0, 1).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(BeamBasis, LowestFunctionIsHalfSquare) {
  const BeamBasis<double> right(4, Side::Right);
  const BeamBasis<double> left(4, Side::Left);
  for (double xi : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(right.evaluate(xi)(0), xi * xi / 2, 1e-15);
    EXPECT_NEAR(left.evaluate(-xi)(0), xi * xi / 2, 1e-15);
    EXPECT_NEAR(left.evaluate(-xi, 1)(0), -xi, 1e-15);
    EXPECT_NEAR(left.evaluate(-xi, 2)(0), 1.0, 1e-15);
  }
}

TEST(BeamBasis, DerivativesAgreeWithFiniteDifferences) {
  const BeamBasis<double> b(7, Side::Right);
  const double h = 1e-6;
  for (double xi : {0.15, 0.6, 0.95}) {
    for (int d = 0; d < 2; ++d) {
      const Eigen::VectorXd fd = (b.evaluate(xi + h, d) - b.evaluate(xi - h, d)) / (2 * h);
      EXPECT_LT((fd - b.evaluate(xi, d + 1)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(BeamBasis, StiffnessGramIsIdentity) {
  for (Side side : {Side::Left, Side::Right}) {
    const BeamBasis<double> b(12, side);
    const Eigen::MatrixXd g = b.table(2).transpose() * b.rule().weights.asDiagonal() * b.table(2);
    EXPECT_LT((g - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Assemble, Dimensions) {
  const auto ss = assemble<double>(kDefaults, 10);
  EXPECT_EQ(ss.dim(), 42);
  EXPECT_EQ(ss.B.cols(), 2);
  EXPECT_EQ(ss.Bd.cols(), 4);
  EXPECT_EQ(ss.C.rows(), 2);
  EXPECT_THROW(assemble<double>(kDefaults, 0), std::invalid_argument);
}

TEST(Assemble, RejectsInvalidParameters) {
  PhysicalParams<double> p;
  p.m = -1;
  EXPECT_THROW(assemble<double>(p, 4), std::invalid_argument);
  p = {};
  p.gamma = 0;
  EXPECT_NO_THROW(assemble<double>(p, 4));
}

TEST(Assemble, CollocatedInputOutput) {
  for (int N : {4, 10, 16}) {
    const auto ss = assemble<double>(kDefaults, N);
    EXPECT_LT((ss.H * ss.B - ss.C.transpose()).cwiseAbs().maxCoeff(), 1e-12) << "N=" << N;
  }
}

TEST(Assemble, EnergyIsDissipated) {
  const auto ss = assemble<double>(kDefaults, 10);
  const Eigen::MatrixXd s = ss.A.transpose() * ss.H + ss.H * ss.A;
  const Eigen::MatrixXd sym = (s + s.transpose()) / 2;
  const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().maxCoeff();
  EXPECT_LT(top, 1e-10 * ss.H.cwiseAbs().maxCoeff());
  // On the velocity block the dissipation is strict: -2 gamma Gram.
  const Eigen::Index v = ss.velocity_offset();
  const Eigen::MatrixXd vv = sym.block(v, v, ss.dim() - v, ss.dim() - v);
  EXPECT_LT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(vv).eigenvalues().maxCoeff(), 0.0);
  EXPECT_LT((vv + 2 * ss.D).cwiseAbs().maxCoeff(), 1e-9 * ss.D.cwiseAbs().maxCoeff());
}

TEST(Assemble, UndampedBeamsAreConservative) {
  PhysicalParams<double> p;
  p.gamma = 0;
  const auto ss = assemble<double>(p, 8);
  const Eigen::MatrixXd s = ss.A.transpose() * ss.H + ss.H * ss.A;
  EXPECT_LT(s.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Assemble, ClampedBeamFrequencies) {
  // With the hub held fixed the elastic block is a pair of clamped-free beams.
  const int N = 12;
  const auto ss = assemble<double>(kDefaults, N);
  const Eigen::MatrixXd mee = ss.M.bottomRightCorner(2 * N, 2 * N);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ss.K, mee);
  const Eigen::VectorXd w = ges.eigenvalues().cwiseSqrt();
  for (int k = 1; k <= 4; ++k) {
    const double mu2 = std::pow(oracle::beam_root(k), 2);
    // Ritz values approach from above.
    for (Eigen::Index i : {2 * (k - 1), 2 * k - 1}) {
      EXPECT_GT(w(i), mu2 * (1 - 1e-10)) << "k=" << k;
      EXPECT_NEAR(w(i), mu2, 1e-6 * mu2) << "k=" << k;
    }
  }
}

TEST(Assemble, LoadVectorOfUniformDisturbance) {
  const auto ss = assemble<double>(kDefaults, 6);
  // Generalized force of a unit load on the right beam: (1, 1/2, int phi_j).
  const Eigen::VectorXd f = ss.M * ss.Bd.col(1).tail(ss.dim() - ss.velocity_offset());
  EXPECT_NEAR(f(0), 1.0, 1e-12);
  EXPECT_NEAR(f(1), 0.5, 1e-12);
  EXPECT_NEAR(f(2 + 6), 1.0 / 6.0, 1e-12);  // int_0^1 xi^2/2
  EXPECT_NEAR(f(2), 0.0, 1e-12);
  const Eigen::VectorXd g = ss.M * ss.Bd.col(0).tail(ss.dim() - ss.velocity_offset());
  EXPECT_NEAR(g(1), -0.5, 1e-12);
  EXPECT_NEAR(g(2), 1.0 / 6.0, 1e-12);
}

TEST(ProjectInitialState, ReproducesPolynomialDeflection) {
  const auto ss = assemble<double>(kDefaults, 6);
  const Eigen::VectorXd x = project_initial_state(InitialProfiles<double>::paper_x0(), ss);
  EXPECT_LT(x.tail(ss.dim() - ss.velocity_offset()).norm(), 1e-14);
  for (double xi : {0.0, 0.3, 0.8, 1.0}) {
    const double eta = ((std::pow(1 - xi, 4) - 1) + 4 * xi) / 3;
    EXPECT_NEAR(ss.right.evaluate(xi).dot(x.segment(6, 6)), eta, 1e-13);
    EXPECT_NEAR(ss.left.evaluate(-xi).dot(x.segment(0, 6)), eta, 1e-13);
  }
  // Stored energy (1/2) int m^2 / EI is 8/5 on each beam.
  const double energy = 0.5 * x.dot(ss.H * x);
  EXPECT_NEAR(energy, 16.0 / 5.0, 1e-12);
}

TEST(ProjectInitialState, HubVelocity) {
  const auto ss = assemble<double>(kDefaults, 5);
  InitialProfiles<double> ip;
  ip.hub_velocity = 2.0;
  ip.right_velocity = polynomial_profile<double>({2.0});
  ip.left_velocity = polynomial_profile<double>({2.0});
  const Eigen::VectorXd x = project_initial_state(ip, ss);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(ss.dim());
  expected(ss.velocity_offset()) = 2.0;
  EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GalerkinTransfer, ZeroFrequencyLimit) {
  const auto ss = assemble<double>(kDefaults, 10);
  const auto p0 = galerkin_transfer(ss, 0.0);
  EXPECT_NEAR(std::abs(p0(0, 0) - 0.1), 0, 1e-10);
  EXPECT_NEAR(std::abs(p0(1, 1) - 0.3), 0, 1e-10);
}

TEST(GalerkinTransfer, ConvergesToClosedForm) {
  const auto ss = assemble<double>(kDefaults, 12);
  for (double w : {0.1, 1.0, 2.0, 6.0}) {
    const auto exact = analytic::plant_transfer(w, kDefaults);
    EXPECT_LT((galerkin_transfer(ss, w) - exact).norm() / exact.norm(), 1e-8) << "omega=" << w;
  }
}

}  // namespace
}  // namespace flexsat
