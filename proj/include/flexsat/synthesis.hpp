#pragma once

#include <vector>

#include "flexsat/discretize.hpp"
#include "flexsat/types.hpp"

namespace flexsat {

/// Error-feedback controller  z' = G1 z + G2 e,  u = K z - kappa e.
struct ControllerRealization {
  MatrixXd G1, G2, K, kappa;
  Eigen::Index nc() const { return G1.rows(); }
};

/// Servocompensator frequencies: always the zero block plus the sorted
/// positive frequencies omega_1 < ... < omega_q.
struct InternalModel {
  std::vector<double> positive;

  int q() const { return static_cast<int>(positive.size()); }
  int dim() const { return 2 * (2 * q() + 1); }
  /// Real block-diagonal generator: 0_2, then [[0, w I], [-w I, 0]] per w.
  MatrixXd generator() const;
  /// Frequencies -omega_q .. omega_q in ascending order.
  std::vector<double> signed_frequencies() const;
};

/// Sorts the list and drops a leading zero. Throws std::invalid_argument on
/// negative, non-finite or duplicate entries.
InternalModel make_internal_model(std::vector<double> freqs);

ControllerRealization build_passive_controller(const std::vector<double>& freqs, double c1,
                                               double c2);

struct SylvesterSolution {
  MatrixXcd H;                 ///< 2 rows per frequency, ordered -omega_q .. omega_q
  std::vector<double> omegas;  ///< the same ordering
  double residual = 0;         ///< ||G1 H - H A - G2 C||_F
  double relative_residual = 0;  ///< residual / (1 + ||H||_F)
};

/// H_k = C (i omega_k - A)^{-1} for the complex diagonal internal model.
SylvesterSolution solve_sylvester_H(const LinearStateSpace<double>& ss,
                                    const std::vector<double>& freqs);

struct CareSolution {
  MatrixXd P;
  MatrixXd K;  ///< R^{-1} B^T P, stabilizing for u = -K x
  double residual = 0;  ///< ||A^T P + P A - P B R^{-1} B^T P + Q||_F / max(1, ||P||_F)
  double closed_loop_abscissa = 0;
};

/// Stabilizing solution of A^T P + P A - P B R^{-1} B^T P + Q = 0 from the
/// stable invariant subspace of the Hamiltonian, optionally polished by one
/// Newton-Kleinman step.
CareSolution care_solve(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Q, const MatrixXd& R,
                        bool refine = true);

struct ObserverDesign {
  ControllerRealization controller;
  MatrixXd G1_real, G2_real, H_real, B1_real, K1, K2;
  SylvesterSolution sylvester;
  CareSolution care;
  double similarity_error = 0;  ///< max deviation of the real/complex change of basis
  double servo_abscissa = 0;    ///< spectral abscissa of G1_real + B1_real K1
};

ObserverDesign build_observer_controller(const LinearStateSpace<double>& ss,
                                         const std::vector<double>& freqs, double q0, double r0);

/// Closed loop with exogenous input u_e = (w_d, y_ref) and output e.
struct ClosedLoopSystem {
  MatrixXd Ae, Be, Ce, De;
  Eigen::Index n_plant = 0;
  Eigen::Index n_ctrl = 0;
  MatrixXd H;       ///< plant energy weight
  MatrixXd U_state; ///< u = U_state * x_e + U_ref * y_ref
  MatrixXd U_ref;
  Eigen::Index dim() const { return Ae.rows(); }
};

ClosedLoopSystem assemble_closed_loop(const LinearStateSpace<double>& ss,
                                      const ControllerRealization& ctrl);

struct RegulationResidual {
  double omega;
  double residual;  ///< ||C_e (i omega - A_e)^{-1} B_e + D_e||_2
};

/// Residuals at 0 and +-omega_k. Throws std::runtime_error if A_e is not Hurwitz.
std::vector<RegulationResidual> regulation_zero_check(const ClosedLoopSystem& cl,
                                                      const std::vector<double>& freqs);

}  // namespace flexsat
