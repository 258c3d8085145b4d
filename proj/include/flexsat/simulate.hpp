#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flexsat/synthesis.hpp"
#include "flexsat/types.hpp"

namespace flexsat {

/// a0 + sum_k [a_k cos(w_k t) + b_k sin(w_k t)].
struct SignalSpec {
  struct Term {
    double omega;
    VectorXd a;
    VectorXd b;
  };
  VectorXd a0;
  std::vector<Term> terms;

  static SignalSpec zero(Eigen::Index dim);
  Eigen::Index dim() const { return a0.size(); }
  /// Positive frequencies with a nonzero coefficient.
  std::vector<double> active_frequencies() const;
};

VectorXd eval_signal(const SignalSpec& spec, double t);

/// (1 + 3 cos t, 2 - sin 5t + 1.5 cos 2t).
SignalSpec paper_reference();
/// Constant (0, 0, 10, 15).
SignalSpec paper_disturbance();

/// exp(M) by scaling and squaring with a diagonal Pade approximant.
MatrixXd matrix_exponential(const MatrixXd& M);

struct SimulationTrace {
  VectorXd t;
  MatrixXd y;  ///< 2 x samples
  MatrixXd e;
  MatrixXd u;
  VectorXd energy;
  MatrixXd states;  ///< closed-loop states, filled when requested
};

struct IntegrateOptions {
  bool record_states = false;
};

/// Exact sampled solution of the closed loop driven by the exosystem that
/// generates (w_d, y_ref). Requires T to be an integer multiple of dt.
SimulationTrace integrate(const ClosedLoopSystem& cl, const VectorXd& x0, const SignalSpec& yref,
                          const SignalSpec& wd, double T, double dt,
                          const IntegrateOptions& opts = {});

/// Trailing fraction of the run used for the decay-rate fit.
inline constexpr double kDecayFitFraction = 0.5;
/// Floor applied to ||e|| before taking logarithms.
inline constexpr double kLogFloor = 1e-14;

struct ErrorMetrics {
  double l2sq = 0;
  double decay_rate = 0;
  bool floored = false;
};

ErrorMetrics error_metrics(const SimulationTrace& trace);

/// max ||e(t)|| over samples with t in [t0, t1].
double max_error_norm(const SimulationTrace& trace, double t0, double t1);

void write_trace_csv(const SimulationTrace& trace, std::ostream& os);

}  // namespace flexsat
