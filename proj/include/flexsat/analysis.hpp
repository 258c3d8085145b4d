#pragma once

#include <complex>
#include <vector>

#include "flexsat/analytic.hpp"
#include "flexsat/discretize.hpp"
#include "flexsat/types.hpp"

namespace flexsat {

/// Eigenvalue with the largest real part of a real square matrix.
std::complex<double> rightmost_eigenvalue(const MatrixXd& A);

/// max Re(lambda(A)); the stability margin is its negation.
double spectral_abscissa(const MatrixXd& A);

struct ResolventSample {
  double omega;
  double norm;
};

/// ||(i omega - A)^{-1}||_2 on the grid.
std::vector<ResolventSample> resolvent_norm_scan(const MatrixXd& A,
                                                 const std::vector<double>& omegas);

/// Resolvent norm in the state energy norm ||x||_H^2 = x^T H x, the norm in
/// which the semigroup is a contraction.
std::vector<ResolventSample> resolvent_norm_scan(const LinearStateSpace<double>& ss,
                                                 const std::vector<double>& omegas);

/// Spectral norm of a 2x2 complex matrix.
template <typename Scalar>
Scalar norm2(const ComplexMatrix2<Scalar>& m) {
  using std::abs;
  using std::sqrt;
  const Scalar fro2 = m.cwiseAbs2().sum();
  const Scalar det = abs(m.determinant());
  Scalar disc = fro2 * fro2 - Scalar(4) * det * det;
  if (disc < Scalar(0)) disc = Scalar(0);
  return sqrt((fro2 + sqrt(disc)) / Scalar(2));
}

struct TransferErrorRow {
  int N;
  double max_relative_error;
  double worst_omega;
};

/// For each N, max over omegas of ||P^N(i w) - P(i w)|| / ||P(i w)||.
template <typename Scalar>
std::vector<TransferErrorRow> transfer_error_report(const PhysicalParams<Scalar>& p,
                                                    const std::vector<int>& Ns,
                                                    const std::vector<double>& omegas) {
  std::vector<TransferErrorRow> rows;
  for (int N : Ns) {
    const LinearStateSpace<Scalar> ss = assemble<Scalar>(p, N);
    TransferErrorRow row{N, 0.0, 0.0};
    for (double w : omegas) {
      const ComplexMatrix2<Scalar> exact = analytic::plant_transfer<Scalar>(Scalar(w), p);
      const ComplexMatrix2<Scalar> approx = galerkin_transfer<Scalar>(ss, Scalar(w));
      const double err = static_cast<double>(norm2<Scalar>(approx - exact) / norm2<Scalar>(exact));
      if (err > row.max_relative_error) {
        row.max_relative_error = err;
        row.worst_omega = w;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

/// Fitted constant M with ||P_b(i w)|| <= M (|w| + 1) on the grid.
double beam_growth_constant(const PhysicalParams<double>& p, const std::vector<double>& omegas);

/// min over the grid of |Q_1|, |Q_2|, the diagonal of I + P_b P_c.
struct InterconnectionBound {
  double q1_min;
  double q2_min;
};
InterconnectionBound interconnection_lower_bound(const PhysicalParams<double>& p,
                                                 const std::vector<double>& omegas);

}  // namespace flexsat
