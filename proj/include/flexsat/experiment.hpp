#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexsat/discretize.hpp"
#include "flexsat/simulate.hpp"
#include "flexsat/synthesis.hpp"

namespace flexsat {

/// Invalid or inconsistent experiment description.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ControllerKind { Passive, Observer };

/// Initial condition: a named preset or explicit polynomial coefficients
/// (ascending powers of xi on each beam's own domain).
struct InitialSpec {
  std::string preset = "paper_x0";  ///< paper_x0 | zero | custom
  std::vector<double> left_velocity, left_moment, right_velocity, right_moment;
  double hub_velocity = 0;
  double hub_angular_velocity = 0;
};

struct ExperimentConfig {
  PhysicalParams<double> params;
  int N = 10;
  ControllerKind controller = ControllerKind::Passive;
  double c1 = 2.5, c2 = 4.0;
  double q0 = 10.0, r0 = 0.1;
  std::vector<double> freqs{0.0, 1.0, 2.0, 5.0};
  SignalSpec reference = paper_reference();
  SignalSpec disturbance = paper_disturbance();
  /// Polynomial shapes b_d1 (left) and b_d2 (right) of the distributed disturbance.
  std::vector<double> bd_left{1.0}, bd_right{1.0};
  InitialSpec initial;
  double T = 15.0, dt = 0.005;
  /// Multiplicative factors applied to the simulated plant only.
  std::map<std::string, double> perturb;

  /// Throws ConfigError.
  void validate() const;
};

InitialProfiles<double> initial_profiles(const InitialSpec& spec);
DisturbanceProfiles<double> disturbance_profiles(const ExperimentConfig& cfg);

/// Copy of `p` with each named field scaled. Throws ConfigError on unknown names.
PhysicalParams<double> apply_perturbation(PhysicalParams<double> p,
                                          const std::map<std::string, double>& factors);

/// Parses "gamma=0.9,m=1.1".
std::map<std::string, double> parse_perturbation(const std::string& text);

struct Setup {
  LinearStateSpace<double> nominal;  ///< plant the controller is designed for
  LinearStateSpace<double> plant;    ///< plant in the loop (possibly perturbed)
  ControllerRealization controller;
  std::optional<ObserverDesign> observer;
  ClosedLoopSystem closed_loop;
  VectorXd x0;  ///< closed-loop initial state (controller starts at rest)
};

Setup build_setup(const ExperimentConfig& cfg);

struct ExperimentResult {
  double margin = 0;
  std::complex<double> rightmost{};
  bool stable = false;
  std::vector<RegulationResidual> regulation;
  std::optional<SimulationTrace> trace;
  ErrorMetrics metrics;
};

/// Synthesizes, assembles and (if stable and requested) simulates.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool simulate = true);

struct SweepPoint {
  double value = 0;
  bool stable = false;
  double margin = 0;  ///< NaN unless stable
  double l2sq = 0;    ///< NaN unless stable
  std::string error;  ///< synthesis/simulation failure, if any
};

struct SweepResult {
  std::string param;
  std::vector<SweepPoint> points;
};

/// Applies `param` in {c1, c2, q0, r0} to the base config at every grid value.
/// Work items run on up to `workers` threads (0 = hardware concurrency);
/// results keep grid order.
SweepResult sweep(const ExperimentConfig& base, const std::string& param,
                  const std::vector<double>& grid, unsigned workers = 0);

void write_sweep_csv(const SweepResult& result, std::ostream& os);

/// Parses "lo:hi:n" or "lo:hi:n:log" into a strictly increasing grid.
std::vector<double> parse_grid(const std::string& text);

}  // namespace flexsat
