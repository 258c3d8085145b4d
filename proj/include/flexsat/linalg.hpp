#pragma once

#include <functional>

#include "flexsat/types.hpp"

namespace flexsat::linalg {

struct OrderedSchur {
  MatrixXcd T;  ///< upper triangular
  MatrixXcd U;  ///< unitary, A = U T U^*
  int selected = 0;  ///< leading eigenvalues satisfying the predicate
};

/// Complex Schur form with the eigenvalues satisfying `select` moved to the
/// leading diagonal positions by adjacent Givens swaps.
OrderedSchur ordered_schur(const MatrixXcd& a,
                           const std::function<bool(std::complex<double>)>& select);

/// Solves A X + X B = C for square A (m x m) and B (n x n) by reduction to
/// complex Schur form. Throws if A and -B share an eigenvalue.
MatrixXcd solve_sylvester(const MatrixXcd& a, const MatrixXcd& b, const MatrixXcd& c);

/// Solves A^T X + X A = -W for real A, W.
MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& w);

}  // namespace flexsat::linalg
