#include "flexsat/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace flexsat::linalg {
namespace {

using cd = std::complex<double>;

// Plane rotation [c s; -conj(s) c] zeroing g against f.
void lartg(cd f, cd g, double& c, cd& s) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
    return;
  }
  const double nrm = std::hypot(af, ag);
  c = af / nrm;
  s = (f / af) * std::conj(g) / nrm;
}

// x <- c x + s y, y <- c y - conj(s) x, elementwise.
template <typename X, typename Y>
void rot(X&& x, Y&& y, double c, cd s) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const cd xi = x(i);
    const cd yi = y(i);
    x(i) = c * xi + s * yi;
    y(i) = c * yi - std::conj(s) * xi;
  }
}

// Exchanges diagonal entries k and k+1 of the triangular T, updating U.
void swap_adjacent(MatrixXcd& t, MatrixXcd& u, Eigen::Index k) {
  const Eigen::Index n = t.rows();
  const cd t11 = t(k, k);
  const cd t22 = t(k + 1, k + 1);
  double c;
  cd s;
  lartg(t(k, k + 1), t22 - t11, c, s);
  if (k + 2 < n) rot(t.row(k).tail(n - k - 2), t.row(k + 1).tail(n - k - 2), c, s);
  rot(t.col(k).head(k), t.col(k + 1).head(k), c, std::conj(s));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  rot(u.col(k), u.col(k + 1), c, std::conj(s));
}

}  // namespace

OrderedSchur ordered_schur(const MatrixXcd& a, const std::function<bool(cd)>& select) {
  Eigen::ComplexSchur<MatrixXcd> schur(a);
  if (schur.info() != Eigen::Success) throw std::runtime_error("ordered_schur: QR iteration failed");
  OrderedSchur out{schur.matrixT(), schur.matrixU(), 0};
  // Eigen only fills the upper triangle.
  out.T.triangularView<Eigen::StrictlyLower>().setZero();
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!select(out.T(i, i))) continue;
    for (Eigen::Index k = i - 1; k >= out.selected; --k) swap_adjacent(out.T, out.U, k);
    ++out.selected;
  }
  return out;
}

MatrixXcd solve_sylvester(const MatrixXcd& a, const MatrixXcd& b, const MatrixXcd& c) {
  Eigen::ComplexSchur<MatrixXcd> sa(a), sb(b);
  if (sa.info() != Eigen::Success || sb.info() != Eigen::Success)
    throw std::runtime_error("solve_sylvester: Schur decomposition failed");
  const MatrixXcd t = sa.matrixT().triangularView<Eigen::Upper>();
  const MatrixXcd s = sb.matrixT().triangularView<Eigen::Upper>();
  const MatrixXcd f = sa.matrixU().adjoint() * c * sb.matrixU();
  const Eigen::Index m = a.rows();
  const Eigen::Index n = b.rows();
  MatrixXcd y(m, n);
  const double scale = t.cwiseAbs().maxCoeff() + s.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd rhs = f.col(j);
    if (j > 0) rhs -= y.leftCols(j) * s.col(j).head(j);
    MatrixXcd shifted = t;
    shifted.diagonal().array() += s(j, j);
    if (shifted.diagonal().cwiseAbs().minCoeff() <= 1e-14 * scale)
      throw std::runtime_error("solve_sylvester: A and -B share an eigenvalue");
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return sa.matrixU() * y * sb.matrixU().adjoint();
}

MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& w) {
  const MatrixXcd x = solve_sylvester(a.transpose().cast<cd>(), a.cast<cd>(), -w.cast<cd>());
  const MatrixXd xr = x.real();
  return (xr + xr.transpose()) / 2.0;
}

}  // namespace flexsat::linalg
