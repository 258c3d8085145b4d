#include "flexsat/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "flexsat/analysis.hpp"
#include "flexsat/linalg.hpp"

namespace flexsat {
namespace {

using cd = std::complex<double>;

void require_hurwitz(const MatrixXd& A, const char* what) {
  const double sa = spectral_abscissa(A);
  if (!(sa < 0)) {
    std::ostringstream msg;
    msg << what << ": spectral abscissa " << sa << " is not negative";
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

InternalModel make_internal_model(std::vector<double> freqs) {
  for (double w : freqs)
    if (!std::isfinite(w) || w < 0)
      throw std::invalid_argument("internal model frequencies must be finite and non-negative");
  std::sort(freqs.begin(), freqs.end());
  if (std::adjacent_find(freqs.begin(), freqs.end()) != freqs.end())
    throw std::invalid_argument("internal model frequencies must be distinct");
  InternalModel im;
  for (double w : freqs)
    if (w > 0) im.positive.push_back(w);
  return im;
}

MatrixXd InternalModel::generator() const {
  MatrixXd g = MatrixXd::Zero(dim(), dim());
  for (int k = 0; k < q(); ++k) {
    const Eigen::Index o = 2 + 4 * k;
    g.block(o, o + 2, 2, 2) = positive[k] * Eigen::Matrix2d::Identity();
    g.block(o + 2, o, 2, 2) = -positive[k] * Eigen::Matrix2d::Identity();
  }
  return g;
}

std::vector<double> InternalModel::signed_frequencies() const {
  std::vector<double> out;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), positive.begin(), positive.end());
  return out;
}

ControllerRealization build_passive_controller(const std::vector<double>& freqs, double c1,
                                               double c2) {
  if (!(c1 > 0) || !(c2 > 0))
    throw std::invalid_argument("passive controller gains c1, c2 must be positive");
  const InternalModel im = make_internal_model(freqs);
  ControllerRealization c;
  c.G1 = im.generator();
  c.G2 = MatrixXd::Zero(im.dim(), 2);
  c.G2.topRows(2) = -Eigen::Matrix2d::Identity();
  for (int k = 0; k < im.q(); ++k) c.G2.block(2 + 4 * k, 0, 2, 2) = -c1 * Eigen::Matrix2d::Identity();
  c.K = -c.G2.transpose();
  c.kappa = c2 * Eigen::Matrix2d::Identity();
  return c;
}

SylvesterSolution solve_sylvester_H(const LinearStateSpace<double>& ss,
                                    const std::vector<double>& freqs) {
  const InternalModel im = make_internal_model(freqs);
  const Eigen::Index n = ss.dim();
  SylvesterSolution out;
  out.omegas = im.signed_frequencies();
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(out.omegas.size());
  out.H.resize(rows, n);
  const MatrixXcd a = ss.A.cast<cd>();
  const MatrixXcd c = ss.C.cast<cd>();
  for (std::size_t k = 0; k < out.omegas.size(); ++k) {
    MatrixXcd shifted = -a;
    shifted.diagonal().array() += cd(0, out.omegas[k]);
    // H_k solves H_k (i w_k - A) = C, i.e. (i w_k - A)^T H_k^T = C^T.
    const Eigen::PartialPivLU<MatrixXcd> lu(shifted.transpose());
    const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
    const double ratio = piv.minCoeff() / piv.maxCoeff();
    if (ratio < 1e-13) {
      std::ostringstream msg;
      msg << "solve_sylvester_H: i*" << out.omegas[k]
          << " - A is near-singular (pivot ratio " << ratio << ")";
      throw std::runtime_error(msg.str());
    }
    out.H.middleRows(2 * k, 2) = lu.solve(c.transpose()).transpose();
  }
  MatrixXcd g1 = MatrixXcd::Zero(rows, rows);
  for (std::size_t k = 0; k < out.omegas.size(); ++k)
    g1.block(2 * k, 2 * k, 2, 2) = cd(0, out.omegas[k]) * Eigen::Matrix2cd::Identity();
  MatrixXcd g2(rows, 2);
  for (std::size_t k = 0; k < out.omegas.size(); ++k)
    g2.middleRows(2 * k, 2) = Eigen::Matrix2cd::Identity();
  out.residual = (g1 * out.H - out.H * a - g2 * c).norm();
  out.relative_residual = out.residual / (1.0 + out.H.norm());
  return out;
}

CareSolution care_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R,
                        bool refine) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
      R.cols() != B.cols())
    throw std::invalid_argument("care_solve: dimension mismatch");
  const Eigen::LLT<MatrixXd> rllt(R);
  if (rllt.info() != Eigen::Success) throw std::invalid_argument("care_solve: R must be SPD");
  const MatrixXd rinv_bt = rllt.solve(B.transpose());
  const MatrixXd g = B * rinv_bt;

  MatrixXd ham(2 * n, 2 * n);
  ham << A, -g, -Q, -A.transpose();
  const double scale = std::max(1.0, ham.cwiseAbs().maxCoeff());
  const auto schur = linalg::ordered_schur(
      ham.cast<cd>(), [scale](cd l) { return l.real() < -1e-12 * scale; });
  if (schur.selected != n) {
    std::ostringstream msg;
    msg << "care_solve: Hamiltonian has " << schur.selected << " stable eigenvalues, expected " << n
        << " (pair not stabilizable or imaginary-axis eigenvalues)";
    throw std::runtime_error(msg.str());
  }
  const MatrixXcd u11 = schur.U.topLeftCorner(n, n);
  const MatrixXcd u21 = schur.U.bottomLeftCorner(n, n);
  const Eigen::PartialPivLU<MatrixXcd> lu(u11.transpose());
  const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
  if (piv.minCoeff() < 1e-13 * piv.maxCoeff())
    throw std::runtime_error("care_solve: stable subspace basis is ill-conditioned");
  const MatrixXd p_raw = lu.solve(u21.transpose()).transpose().real();

  auto residual_of = [&](const MatrixXd& p) {
    const MatrixXd r = A.transpose() * p + p * A - p * g * p + Q;
    return r.norm() / std::max(1.0, p.norm());
  };

  CareSolution out;
  out.P = (p_raw + p_raw.transpose()) / 2.0;
  out.residual = residual_of(out.P);
  if (refine) {
    // Newton-Kleinman step: (A - G P)^T X + X (A - G P) = -(Q + P G P).
    const MatrixXd ak = A - g * out.P;
    try {
      const MatrixXd x = linalg::solve_lyapunov(ak, Q + out.P * g * out.P);
      const double r = residual_of(x);
      if (r < out.residual) {
        out.P = x;
        out.residual = r;
      }
    } catch (const std::runtime_error&) {
      // keep the unrefined solution
    }
  }
  out.K = rinv_bt * out.P;
  out.closed_loop_abscissa = spectral_abscissa(A - B * out.K);
  if (!(out.closed_loop_abscissa < 0))
    throw std::runtime_error("care_solve: solution is not stabilizing");
  return out;
}

ObserverDesign build_observer_controller(const LinearStateSpace<double>& ss,
                                         const std::vector<double>& freqs, double q0, double r0) {
  if (!(q0 > 0) || !(r0 > 0)) throw std::invalid_argument("observer weights q0, r0 must be positive");
  require_hurwitz(ss.A, "build_observer_controller");
  const InternalModel im = make_internal_model(freqs);
  ObserverDesign d;
  d.sylvester = solve_sylvester_H(ss, freqs);
  const Eigen::Index n = ss.dim();
  const int q = im.q();
  const Eigen::Index nz = im.dim();
  const double r2 = std::sqrt(2.0);

  // Complex coordinates are ordered -w_q..w_q; zero block sits at index q.
  auto block_of = [q](int k) { return 2 * (q + k); };  // k in [-q, q]

  d.G1_real = im.generator();
  d.G2_real = MatrixXd::Zero(nz, 2);
  d.G2_real.topRows(2).setIdentity();
  d.H_real.resize(nz, n);
  d.H_real.topRows(2) = d.sylvester.H.middleRows(block_of(0), 2).real();
  // Unitary T with p = (z+ + z-)/sqrt2, r = i(z+ - z-)/sqrt2 per frequency.
  MatrixXcd T = MatrixXcd::Zero(nz, nz);
  T.block(0, block_of(0), 2, 2).setIdentity();
  for (int k = 1; k <= q; ++k) {
    const Eigen::Index o = 2 + 4 * (k - 1);
    const MatrixXcd hp = d.sylvester.H.middleRows(block_of(k), 2);
    d.H_real.middleRows(o, 2) = r2 * hp.real();
    d.H_real.middleRows(o + 2, 2) = -r2 * hp.imag();
    d.G2_real.middleRows(o, 2) = r2 * Eigen::Matrix2d::Identity();
    const cd a(1.0 / r2, 0.0), b(0.0, 1.0 / r2);
    T.block(o, block_of(k), 2, 2) = a * Eigen::Matrix2cd::Identity();
    T.block(o, block_of(-k), 2, 2) = a * Eigen::Matrix2cd::Identity();
    T.block(o + 2, block_of(k), 2, 2) = b * Eigen::Matrix2cd::Identity();
    T.block(o + 2, block_of(-k), 2, 2) = -b * Eigen::Matrix2cd::Identity();
  }

  MatrixXcd g1c = MatrixXcd::Zero(nz, nz);
  const auto omegas = im.signed_frequencies();
  for (std::size_t k = 0; k < omegas.size(); ++k)
    g1c.block(2 * k, 2 * k, 2, 2) = cd(0, omegas[k]) * Eigen::Matrix2cd::Identity();
  MatrixXcd g2c(nz, 2);
  for (std::size_t k = 0; k < omegas.size(); ++k) g2c.middleRows(2 * k, 2).setIdentity();
  const MatrixXcd tinv = T.adjoint();
  const double e_g1 = (T * g1c * tinv - d.G1_real.cast<cd>()).cwiseAbs().maxCoeff();
  const double e_g2 = (T * g2c - d.G2_real.cast<cd>()).cwiseAbs().maxCoeff();
  const double e_h = (T * d.sylvester.H - d.H_real.cast<cd>()).cwiseAbs().maxCoeff() /
                     std::max(1.0, d.H_real.cwiseAbs().maxCoeff());
  d.similarity_error = std::max({e_g1, e_g2, e_h});
  if (!(d.similarity_error <= 1e-10))
    throw std::runtime_error("build_observer_controller: real realization is not similar to the "
                             "complex internal model");

  d.B1_real = d.H_real * ss.B;
  d.care = care_solve(d.G1_real, d.B1_real, q0 * MatrixXd::Identity(nz, nz),
                      r0 * MatrixXd::Identity(2, 2));
  // Hurwitz requirement is on G1 + B1 K1, so the LQR gain enters with a minus.
  d.K1 = -d.care.K;
  d.K2 = d.K1 * d.H_real;
  d.servo_abscissa = spectral_abscissa(d.G1_real + d.B1_real * d.K1);

  ControllerRealization& c = d.controller;
  c.G1 = MatrixXd::Zero(nz + n, nz + n);
  c.G1.topLeftCorner(nz, nz) = d.G1_real;
  c.G1.bottomLeftCorner(n, nz) = ss.B * d.K1;
  c.G1.bottomRightCorner(n, n) = ss.A + ss.B * d.K2;
  c.G2 = MatrixXd::Zero(nz + n, 2);
  c.G2.topRows(nz) = d.G2_real;
  c.K.resize(2, nz + n);
  c.K << d.K1, d.K2;
  c.kappa = MatrixXd::Zero(2, 2);
  return d;
}

ClosedLoopSystem assemble_closed_loop(const LinearStateSpace<double>& ss,
                                      const ControllerRealization& ctrl) {
  const Eigen::Index n = ss.dim();
  const Eigen::Index nc = ctrl.G1.rows();
  MatrixXd kappa = ctrl.kappa.size() == 0 ? MatrixXd::Zero(2, 2) : ctrl.kappa;
  if (ctrl.G1.cols() != nc || ctrl.G2.rows() != nc || ctrl.G2.cols() != 2 || ctrl.K.rows() != 2 ||
      ctrl.K.cols() != nc || kappa.rows() != 2 || kappa.cols() != 2 || ss.B.cols() != 2 ||
      ss.C.rows() != 2 || ss.Bd.cols() != 4)
    throw std::invalid_argument("assemble_closed_loop: dimension mismatch");
  ClosedLoopSystem cl;
  cl.n_plant = n;
  cl.n_ctrl = nc;
  cl.H = ss.H;
  cl.Ae.resize(n + nc, n + nc);
  cl.Ae.topLeftCorner(n, n) = ss.A - ss.B * kappa * ss.C;
  cl.Ae.topRightCorner(n, nc) = ss.B * ctrl.K;
  cl.Ae.bottomLeftCorner(nc, n) = ctrl.G2 * ss.C;
  cl.Ae.bottomRightCorner(nc, nc) = ctrl.G1;
  cl.Be = MatrixXd::Zero(n + nc, 6);
  cl.Be.topLeftCorner(n, 4) = ss.Bd;
  cl.Be.topRightCorner(n, 2) = ss.B * kappa;
  cl.Be.bottomRightCorner(nc, 2) = -ctrl.G2;
  cl.Ce = MatrixXd::Zero(2, n + nc);
  cl.Ce.leftCols(n) = ss.C;
  cl.De = MatrixXd::Zero(2, 6);
  cl.De.rightCols(2) = -Eigen::Matrix2d::Identity();
  cl.U_state.resize(2, n + nc);
  cl.U_state << -kappa * ss.C, ctrl.K;
  cl.U_ref = kappa;
  return cl;
}

std::vector<RegulationResidual> regulation_zero_check(const ClosedLoopSystem& cl,
                                                      const std::vector<double>& freqs) {
  require_hurwitz(cl.Ae, "regulation_zero_check");
  const InternalModel im = make_internal_model(freqs);
  const MatrixXcd ae = cl.Ae.cast<cd>();
  std::vector<RegulationResidual> out;
  for (double w : im.signed_frequencies()) {
    MatrixXcd shifted = -ae;
    shifted.diagonal().array() += cd(0, w);
    const MatrixXcd g =
        cl.Ce.cast<cd>() * shifted.partialPivLu().solve(cl.Be.cast<cd>()) + cl.De.cast<cd>();
    const Eigen::JacobiSVD<MatrixXcd> svd(g);
    out.push_back({w, svd.singularValues()(0)});
  }
  return out;
}

}  // namespace flexsat
