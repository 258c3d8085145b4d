#include "flexsat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "flexsat/analysis.hpp"

namespace flexsat {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double* param_field(PhysicalParams<double>& p, const std::string& name) {
  if (name == "rho") return &p.rho;
  if (name == "a") return &p.a;
  if (name == "E") return &p.E;
  if (name == "I") return &p.I;
  if (name == "gamma") return &p.gamma;
  if (name == "m") return &p.m;
  if (name == "I_m") return &p.I_m;
  return nullptr;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void check_signal(const SignalSpec& s, Eigen::Index dim, const char* name) {
  auto bad = [&](const std::string& why) {
    throw ConfigError(std::string(name) + ": " + why);
  };
  if (s.a0.size() != dim) bad("offset has wrong dimension");
  if (!s.a0.allFinite()) bad("non-finite offset");
  for (const auto& t : s.terms) {
    if (t.a.size() != dim || t.b.size() != dim) bad("coefficient has wrong dimension");
    if (!std::isfinite(t.omega) || !t.a.allFinite() || !t.b.allFinite()) bad("non-finite entry");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    params.validate(/*allow_zero_damping=*/true);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (N < 1 || N > 64) throw ConfigError("N must be in [1, 64]");
  if (controller == ControllerKind::Passive && (!(c1 > 0) || !(c2 > 0)))
    throw ConfigError("passive controller gains c1, c2 must be positive");
  if (controller == ControllerKind::Observer && (!(q0 > 0) || !(r0 > 0)))
    throw ConfigError("observer weights q0, r0 must be positive");
  InternalModel im;
  try {
    im = make_internal_model(freqs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  check_signal(reference, 2, "reference");
  check_signal(disturbance, 4, "disturbance");
  for (const SignalSpec* s : {&reference, &disturbance})
    for (double w : s->active_frequencies())
      if (std::find(im.positive.begin(), im.positive.end(), w) == im.positive.end()) {
        std::ostringstream msg;
        msg << "signal frequency " << w << " is not in the controller's frequency list";
        throw ConfigError(msg.str());
      }
  if (!(dt > 0) || !(T >= dt)) throw ConfigError("need dt > 0 and T >= dt");
  const double ratio = T / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw ConfigError("T must be an integer multiple of dt");
  if (initial.preset != "paper_x0" && initial.preset != "zero" && initial.preset != "custom")
    throw ConfigError("unknown initial profile preset '" + initial.preset + "'");
  for (const auto& [name, factor] : perturb) {
    PhysicalParams<double> p;
    if (!param_field(p, name)) throw ConfigError("unknown perturbation parameter '" + name + "'");
    if (!(factor > 0)) throw ConfigError("perturbation factor for '" + name + "' must be positive");
  }
  if (bd_left.empty() || bd_right.empty()) throw ConfigError("disturbance shapes must be nonempty");
}

InitialProfiles<double> initial_profiles(const InitialSpec& spec) {
  if (spec.preset == "paper_x0") return InitialProfiles<double>::paper_x0();
  if (spec.preset == "zero") return InitialProfiles<double>::zero();
  if (spec.preset != "custom") throw ConfigError("unknown initial profile preset '" + spec.preset + "'");
  InitialProfiles<double> p;
  p.left_velocity = polynomial_profile<double>(spec.left_velocity);
  p.left_moment = polynomial_profile<double>(spec.left_moment);
  p.right_velocity = polynomial_profile<double>(spec.right_velocity);
  p.right_moment = polynomial_profile<double>(spec.right_moment);
  p.hub_velocity = spec.hub_velocity;
  p.hub_angular_velocity = spec.hub_angular_velocity;
  return p;
}

DisturbanceProfiles<double> disturbance_profiles(const ExperimentConfig& cfg) {
  return {polynomial_profile<double>(cfg.bd_left), polynomial_profile<double>(cfg.bd_right)};
}

PhysicalParams<double> apply_perturbation(PhysicalParams<double> p,
                                          const std::map<std::string, double>& factors) {
  for (const auto& [name, factor] : factors) {
    double* f = param_field(p, name);
    if (!f) throw ConfigError("unknown perturbation parameter '" + name + "'");
    *f *= factor;
  }
  return p;
}

std::map<std::string, double> parse_perturbation(const std::string& text) {
  std::map<std::string, double> out;
  if (text.empty()) return out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("perturbation entry '" + item + "' lacks '='");
    const std::string name = item.substr(0, eq);
    PhysicalParams<double> p;
    if (!param_field(p, name)) throw ConfigError("unknown perturbation parameter '" + name + "'");
    out[name] = parse_number(item.substr(eq + 1), "perturbation factor");
  }
  return out;
}

Setup build_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  const DisturbanceProfiles<double> bd = disturbance_profiles(cfg);
  LinearStateSpace<double> nominal = assemble<double>(cfg.params, cfg.N, bd);
  LinearStateSpace<double> plant =
      cfg.perturb.empty() ? nominal
                          : assemble<double>(apply_perturbation(cfg.params, cfg.perturb), cfg.N, bd);
  ControllerRealization ctrl;
  std::optional<ObserverDesign> obs;
  if (cfg.controller == ControllerKind::Passive) {
    ctrl = build_passive_controller(cfg.freqs, cfg.c1, cfg.c2);
  } else {
    obs = build_observer_controller(nominal, cfg.freqs, cfg.q0, cfg.r0);
    ctrl = obs->controller;
  }
  ClosedLoopSystem cl = assemble_closed_loop(plant, ctrl);
  VectorXd x0 = VectorXd::Zero(cl.dim());
  x0.head(plant.dim()) = project_initial_state(initial_profiles(cfg.initial), plant);
  return {std::move(nominal), std::move(plant), std::move(ctrl), std::move(obs), std::move(cl),
          std::move(x0)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool simulate) {
  const Setup setup = build_setup(cfg);
  ExperimentResult r;
  r.rightmost = rightmost_eigenvalue(setup.closed_loop.Ae);
  r.margin = -r.rightmost.real();
  r.stable = r.margin > 0;
  if (!r.stable) return r;
  r.regulation = regulation_zero_check(setup.closed_loop, cfg.freqs);
  if (simulate) {
    r.trace = integrate(setup.closed_loop, setup.x0, cfg.reference, cfg.disturbance, cfg.T, cfg.dt);
    r.metrics = error_metrics(*r.trace);
  }
  return r;
}

SweepResult sweep(const ExperimentConfig& base, const std::string& param,
                  const std::vector<double>& grid, unsigned workers) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
  double ExperimentConfig::*field = nullptr;
  const bool passive = base.controller == ControllerKind::Passive;
  if (param == "c1" && passive) field = &ExperimentConfig::c1;
  if (param == "c2" && passive) field = &ExperimentConfig::c2;
  if (param == "q0" && !passive) field = &ExperimentConfig::q0;
  if (param == "r0" && !passive) field = &ExperimentConfig::r0;
  if (!field)
    throw ConfigError("parameter '" + param + "' does not apply to the " +
                      (passive ? "passive" : "observer") + " controller");

  SweepResult result{param, std::vector<SweepPoint>(grid.size())};
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      SweepPoint& pt = result.points[i];
      pt.value = grid[i];
      pt.margin = kNaN;
      pt.l2sq = kNaN;
      try {
        ExperimentConfig cfg = base;
        cfg.*field = grid[i];
        const ExperimentResult r = run_experiment(cfg, true);
        pt.stable = r.stable;
        if (r.stable) {
          pt.margin = r.margin;
          pt.l2sq = r.metrics.l2sq;
        }
      } catch (const std::exception& e) {
        pt.stable = false;
        pt.error = e.what();
      }
    }
  };
  unsigned n = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n = std::min<unsigned>(n, static_cast<unsigned>(grid.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << "param,value,margin,l2sq,stable\n" << std::setprecision(17);
  auto num = [&os](double v) {
    if (std::isnan(v))
      os << "nan";
    else
      os << v;
  };
  for (const SweepPoint& p : result.points) {
    os << result.param << ',';
    num(p.value);
    os << ',';
    num(p.margin);
    os << ',';
    num(p.l2sq);
    os << ',' << (p.stable ? "true" : "false") << '\n';
  }
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4)
    throw ConfigError("grid must be lo:hi:n or lo:hi:n:log, got '" + text + "'");
  const double lo = parse_number(parts[0], "grid bound");
  const double hi = parse_number(parts[1], "grid bound");
  const double nd = parse_number(parts[2], "grid size");
  const bool log = parts.size() == 4;
  if (log && parts[3] != "log") throw ConfigError("grid spacing must be 'log'");
  if (!(nd >= 1) || nd != std::floor(nd)) throw ConfigError("grid size must be a positive integer");
  const int n = static_cast<int>(nd);
  if (n > 1 && !(hi > lo)) throw ConfigError("grid needs hi > lo");
  if (log && !(lo > 0)) throw ConfigError("log grid needs lo > 0");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    g[i] = log ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))) : lo + s * (hi - lo);
  }
  if (n > 1) {
    g.front() = lo;
    g.back() = hi;
  }
  return g;
}

}  // namespace flexsat
