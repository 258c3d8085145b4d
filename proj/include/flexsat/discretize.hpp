#pragma once

// Legendre spectral Galerkin discretization of the hub + two-beam system in a
// floating frame: w(xi, t) = w_c + xi theta_c + eta(xi, t), eta clamped at the
// hub. Generalized coordinates q = (w_c, theta_c, a_left, a_right), state
// x = (a_left, a_right, qdot).

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "flexsat/legendre.hpp"
#include "flexsat/types.hpp"

namespace flexsat {

enum class Side { Left, Right };

/// Scalar profile on a beam domain, xi in [-1, 0] (left) or [0, 1] (right).
template <typename Scalar>
using Profile = std::function<Scalar(const Scalar&)>;

/// Polynomial sum_k c_k xi^k as a profile.
template <typename Scalar>
Profile<Scalar> polynomial_profile(std::vector<Scalar> coeffs) {
  return [c = std::move(coeffs)](const Scalar& xi) {
    Scalar acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * xi + *it;
    return acc;
  };
}

template <typename Scalar>
Profile<Scalar> zero_profile() {
  return [](const Scalar&) { return Scalar(0); };
}

/// Elastic basis of one beam. With x = 2|xi| - 1, phi_j'' is sqrt(2j+1) P_j(x)
/// and phi_j, phi_j' are its antiderivatives from the hub, so the stiffness
/// Gram matrix is the identity.
template <typename Scalar>
class BeamBasis {
 public:
  BeamBasis(int n, Side side) : n_(n), side_(side) {
    if (n < 1) throw std::invalid_argument("BeamBasis: n must be >= 1");
    coef_[0] = MatrixX<Scalar>::Zero(n + 2, n);
    coef_[1] = MatrixX<Scalar>::Zero(n + 2, n);
    coef_[2] = MatrixX<Scalar>::Zero(n + 2, n);
    using std::sqrt;
    for (int j = 0; j < n; ++j) {
      VectorX<Scalar> e = VectorX<Scalar>::Zero(j + 1);
      e(j) = sqrt(Scalar(2 * j + 1));
      const VectorX<Scalar> i1 = legendre::antiderivative(e);
      const VectorX<Scalar> i2 = legendre::antiderivative(i1);
      // d/dxi = 2 d/dx on the right beam.
      coef_[2].col(j).head(j + 1) = e;
      coef_[1].col(j).head(j + 2) = i1 / Scalar(2);
      coef_[0].col(j).head(j + 3) = i2 / Scalar(4);
    }
    const Scalar lo = side == Side::Left ? Scalar(-1) : Scalar(0);
    rule_ = legendre::gauss_legendre<Scalar>(2 * n + 8, lo, lo + Scalar(1));
    const Eigen::Index nq = rule_.nodes.size();
    for (int d = 0; d < 3; ++d) tables_[d].resize(nq, n);
    for (Eigen::Index i = 0; i < nq; ++i)
      for (int d = 0; d < 3; ++d) tables_[d].row(i) = evaluate(rule_.nodes(i), d).transpose();
  }

  int size() const { return n_; }
  Side side() const { return side_; }
  const legendre::GaussRule<Scalar>& rule() const { return rule_; }

  /// Rows: quadrature nodes; columns: basis functions. `order` in {0, 1, 2}.
  const MatrixX<Scalar>& table(int order) const { return tables_.at(order); }

  /// (phi_0 .. phi_{n-1})^(order) at xi.
  VectorX<Scalar> evaluate(const Scalar& xi, int order = 0) const {
    if (order < 0 || order > 2) throw std::invalid_argument("BeamBasis: order must be 0, 1, 2");
    const Scalar s = side_ == Side::Left ? -xi : xi;
    const VectorX<Scalar> p = legendre::polynomials<Scalar>(n_ + 2, Scalar(2) * s - Scalar(1));
    VectorX<Scalar> v = coef_[order].transpose() * p;
    if (side_ == Side::Left && order == 1) v = -v;
    return v;
  }

 private:
  int n_;
  Side side_;
  std::array<MatrixX<Scalar>, 3> coef_;
  std::array<MatrixX<Scalar>, 3> tables_;
  legendre::GaussRule<Scalar> rule_;
};

template <typename Scalar>
BeamBasis<Scalar> build_basis(int n, Side side) {
  return BeamBasis<Scalar>(n, side);
}

/// Spatial shapes b_d1 (left beam) and b_d2 (right beam) of the distributed
/// disturbance.
template <typename Scalar>
struct DisturbanceProfiles {
  Profile<Scalar> left = [](const Scalar&) { return Scalar(1); };
  Profile<Scalar> right = [](const Scalar&) { return Scalar(1); };
};

template <typename Scalar>
struct LinearStateSpace {
  int N{};
  PhysicalParams<Scalar> params;
  MatrixX<Scalar> A, B, Bd, C, H;
  MatrixX<Scalar> M;  ///< generalized mass, (2N+2) square
  MatrixX<Scalar> D;  ///< generalized damping, (2N+2) square
  MatrixX<Scalar> K;  ///< elastic stiffness, 2N square
  BeamBasis<Scalar> left, right;

  Eigen::Index dim() const { return A.rows(); }
  /// Offset of the generalized velocities inside the state.
  Eigen::Index velocity_offset() const { return 2 * N; }
};

namespace detail {

// Rows: generalized-coordinate shape [1, xi, phi_left | phi_right] at each node.
template <typename Scalar>
MatrixX<Scalar> shape_table(const BeamBasis<Scalar>& b, int N) {
  const auto& xi = b.rule().nodes;
  MatrixX<Scalar> s = MatrixX<Scalar>::Zero(xi.size(), 2 * N + 2);
  s.col(0).setOnes();
  s.col(1) = xi;
  const Eigen::Index off = b.side() == Side::Left ? 2 : 2 + N;
  s.middleCols(off, N) = b.table(0);
  return s;
}

template <typename Scalar>
VectorX<Scalar> load_vector(const BeamBasis<Scalar>& b, int N, const Profile<Scalar>& f) {
  const MatrixX<Scalar> s = shape_table(b, N);
  VectorX<Scalar> wf(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    wf(i) = b.rule().weights(i) * f(b.rule().nodes(i));
  return s.transpose() * wf;
}

}  // namespace detail

/// Galerkin state-space model of dimension 4N+2.
template <typename Scalar>
LinearStateSpace<Scalar> assemble(const PhysicalParams<Scalar>& p, int N,
                                  const DisturbanceProfiles<Scalar>& bd = {}) {
  if (N < 1) throw std::invalid_argument("assemble: N must be >= 1");
  p.validate(/*allow_zero_damping=*/true);
  LinearStateSpace<Scalar> ss{N, p, {}, {}, {}, {}, {}, {}, {}, {},
                              BeamBasis<Scalar>(N, Side::Left),
                              BeamBasis<Scalar>(N, Side::Right)};
  const int nq = 2 * N + 2;
  const int ne = 2 * N;
  const int n = ne + nq;

  MatrixX<Scalar> gram = MatrixX<Scalar>::Zero(nq, nq);
  MatrixX<Scalar> stiff = MatrixX<Scalar>::Zero(ne, ne);
  for (const BeamBasis<Scalar>* b : {&ss.left, &ss.right}) {
    const MatrixX<Scalar> s = detail::shape_table(*b, N);
    const auto& w = b->rule().weights;
    gram += s.transpose() * w.asDiagonal() * s;
    const MatrixX<Scalar>& d2 = b->table(2);
    const Eigen::Index off = b->side() == Side::Left ? 0 : N;
    stiff.block(off, off, N, N) += d2.transpose() * w.asDiagonal() * d2;
  }
  ss.M = p.rho_a() * gram;
  ss.M(0, 0) += p.m;
  ss.M(1, 1) += p.I_m;
  ss.D = p.gamma * gram;
  ss.K = p.EI() * stiff;

  MatrixX<Scalar> bf = MatrixX<Scalar>::Zero(nq, 2);
  bf(0, 0) = Scalar(1);
  bf(1, 1) = Scalar(1);
  MatrixX<Scalar> bw(nq, 4);
  bw.col(0) = detail::load_vector(ss.left, N, bd.left);
  bw.col(1) = detail::load_vector(ss.right, N, bd.right);
  bw.rightCols(2) = bf;

  const Eigen::LLT<MatrixX<Scalar>> mass(ss.M);
  if (mass.info() != Eigen::Success) throw std::runtime_error("assemble: mass matrix not SPD");
  // One refinement step keeps M * (M^{-1} X) = X at working precision, which
  // the energy identities of the assembled system rely on.
  auto mass_solve = [&](const MatrixX<Scalar>& rhs) {
    MatrixX<Scalar> y = mass.solve(rhs);
    y += mass.solve(MatrixX<Scalar>(rhs - ss.M * y));
    return y;
  };
  // Elastic coordinates are the trailing 2N generalized coordinates.
  MatrixX<Scalar> k_full = MatrixX<Scalar>::Zero(nq, ne);
  k_full.bottomRows(ne) = ss.K;

  ss.A = MatrixX<Scalar>::Zero(n, n);
  ss.A.block(0, ne + 2, ne, ne).setIdentity();
  ss.A.block(ne, 0, nq, ne) = -mass_solve(k_full);
  ss.A.block(ne, ne, nq, nq) = -mass_solve(ss.D);
  ss.B = MatrixX<Scalar>::Zero(n, 2);
  ss.B.bottomRows(nq) = mass_solve(bf);
  ss.Bd = MatrixX<Scalar>::Zero(n, 4);
  ss.Bd.bottomRows(nq) = mass_solve(bw);
  ss.C = MatrixX<Scalar>::Zero(2, n);
  ss.C.rightCols(nq) = bf.transpose();
  ss.H = MatrixX<Scalar>::Zero(n, n);
  ss.H.topLeftCorner(ne, ne) = ss.K;
  ss.H.bottomRightCorner(nq, nq) = ss.M;
  return ss;
}

/// Initial beam/hub profiles in (velocity, bending moment) variables.
template <typename Scalar>
struct InitialProfiles {
  Profile<Scalar> left_velocity = zero_profile<Scalar>();
  Profile<Scalar> left_moment = zero_profile<Scalar>();
  Profile<Scalar> right_velocity = zero_profile<Scalar>();
  Profile<Scalar> right_moment = zero_profile<Scalar>();
  Scalar hub_velocity{0};
  Scalar hub_angular_velocity{0};

  static InitialProfiles zero() { return {}; }

  /// Zero velocities with moments 4(1+xi)^2 (left) and 4(1-xi)^2 (right).
  static InitialProfiles paper_x0() {
    InitialProfiles p;
    p.left_moment = polynomial_profile<Scalar>({Scalar(4), Scalar(8), Scalar(4)});
    p.right_moment = polynomial_profile<Scalar>({Scalar(4), Scalar(-8), Scalar(4)});
    return p;
  }
};

/// Maps profiles to a state vector. The moment m is converted through
/// eta'' = m / EI by projection in the stiffness inner product; velocities
/// are projected in the mass inner product.
template <typename Scalar>
VectorX<Scalar> project_initial_state(const InitialProfiles<Scalar>& ip,
                                      const LinearStateSpace<Scalar>& ss) {
  const int N = ss.N;
  const int nq = 2 * N + 2;
  const Scalar ei = ss.params.EI();
  const Scalar rho_a = ss.params.rho_a();
  VectorX<Scalar> x = VectorX<Scalar>::Zero(ss.dim());
  // Stiffness Gram is EI * I, so coefficients are plain inner products.
  auto moment_coeffs = [&](const BeamBasis<Scalar>& b, const Profile<Scalar>& m) {
    VectorX<Scalar> wm(b.rule().nodes.size());
    for (Eigen::Index i = 0; i < wm.size(); ++i)
      wm(i) = b.rule().weights(i) * m(b.rule().nodes(i)) / ei;
    return VectorX<Scalar>(b.table(2).transpose() * wm);
  };
  x.segment(0, N) = moment_coeffs(ss.left, ip.left_moment);
  x.segment(N, N) = moment_coeffs(ss.right, ip.right_moment);

  VectorX<Scalar> rhs = rho_a * (detail::load_vector(ss.left, N, ip.left_velocity) +
                                 detail::load_vector(ss.right, N, ip.right_velocity));
  rhs(0) += ss.params.m * ip.hub_velocity;
  rhs(1) += ss.params.I_m * ip.hub_angular_velocity;
  x.segment(2 * N, nq) = ss.M.llt().solve(rhs);
  return x;
}

/// C (i omega I - A)^{-1} B.
template <typename Scalar>
ComplexMatrix2<Scalar> galerkin_transfer(const LinearStateSpace<Scalar>& ss, const Scalar& omega) {
  using C = Complex<Scalar>;
  ComplexMatrixX<Scalar> shifted = -ss.A.template cast<C>();
  shifted.diagonal().array() += C(Scalar(0), omega);
  const Eigen::PartialPivLU<ComplexMatrixX<Scalar>> lu(shifted);
  const VectorX<Scalar> pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > Eigen::NumTraits<Scalar>::epsilon() * pivots.maxCoeff()))
    throw std::runtime_error("galerkin_transfer: i*omega - A is numerically singular");
  const ComplexMatrixX<Scalar> x = lu.solve(ss.B.template cast<C>());
  return ss.C.template cast<C>() * x;
}

}  // namespace flexsat
