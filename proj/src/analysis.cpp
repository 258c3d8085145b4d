#include "flexsat/analysis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace flexsat {
namespace {

using cd = std::complex<double>;

double min_singular_value(const MatrixXcd& m) {
  const Eigen::BDCSVD<MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<ResolventSample> scan(const MatrixXd& a, const std::vector<double>& omegas) {
  std::vector<ResolventSample> out;
  out.reserve(omegas.size());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (double w : omegas) {
    MatrixXcd shifted = -a.cast<cd>();
    shifted.diagonal().array() += cd(0, w);
    const double smin = min_singular_value(shifted);
    if (!(smin > 1e-14 * (scale + std::abs(w))))
      throw std::runtime_error("resolvent_norm_scan: i*omega is (numerically) an eigenvalue");
    out.push_back({w, 1.0 / smin});
  }
  return out;
}

}  // namespace

std::complex<double> rightmost_eigenvalue(const MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("rightmost_eigenvalue: matrix not square");
  if (A.rows() == 0) throw std::invalid_argument("rightmost_eigenvalue: empty matrix");
  const Eigen::EigenSolver<MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("rightmost_eigenvalue: eigensolver did not converge");
  const Eigen::VectorXcd ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (ev(i).real() > ev(best).real()) best = i;
  return ev(best);
}

double spectral_abscissa(const MatrixXd& A) { return rightmost_eigenvalue(A).real(); }

std::vector<ResolventSample> resolvent_norm_scan(const MatrixXd& A,
                                                 const std::vector<double>& omegas) {
  return scan(A, omegas);
}

std::vector<ResolventSample> resolvent_norm_scan(const LinearStateSpace<double>& ss,
                                                 const std::vector<double>& omegas) {
  const Eigen::LLT<MatrixXd> llt(ss.H);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("resolvent_norm_scan: energy weight is not positive definite");
  // Similar matrix L^T A L^{-T}, whose 2-norm resolvent is the H-norm one.
  const MatrixXd lt = llt.matrixU();
  const MatrixXd lt_inv = llt.matrixU().solve(MatrixXd::Identity(ss.dim(), ss.dim()));
  return scan(lt * ss.A * lt_inv, omegas);
}

double beam_growth_constant(const PhysicalParams<double>& p, const std::vector<double>& omegas) {
  double m = 0;
  for (double w : omegas)
    m = std::max(m, norm2<double>(analytic::transfer_beam(w, p)) / (std::abs(w) + 1.0));
  return m;
}

InterconnectionBound interconnection_lower_bound(const PhysicalParams<double>& p,
                                                 const std::vector<double>& omegas) {
  InterconnectionBound b{std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity()};
  for (double w : omegas) {
    const auto q = analytic::interconnection_matrix(w, p);
    b.q1_min = std::min(b.q1_min, std::abs(q(0, 0)));
    b.q2_min = std::min(b.q2_min, std::abs(q(1, 1)));
  }
  return b;
}

}  // namespace flexsat
