// Command-line front end: validate, simulate, sweep, analyze.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexsat/analysis.hpp"
#include "flexsat/analytic.hpp"
#include "flexsat/config.hpp"
#include "flexsat/experiment.hpp"

namespace fs = std::filesystem;
using namespace flexsat;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string perturb;
  std::string param;
  std::string grid;
  int workers = -1;
};

RunConfig resolve(const Options& o) {
  RunConfig rc = o.config_path.empty() ? parse_config("{}") : load_config(o.config_path);
  if (!o.out_dir.empty()) rc.output_dir = o.out_dir;
  for (const auto& [k, v] : parse_perturbation(o.perturb)) rc.experiment.perturb[k] = v;
  if (o.workers >= 0) rc.workers = static_cast<unsigned>(o.workers);
  rc.experiment.validate();
  return rc;
}

std::ofstream open_output(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.output_dir);
  const fs::path path = fs::path(rc.output_dir) / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_manifest(const RunConfig& rc) { open_output(rc, "manifest.json") << dump_config(rc); }

// One line per check: status, name, measured value, threshold.
class Report {
 public:
  void check(const std::string& name, bool ok, double value, const std::string& bound) {
    line(ok ? "PASS" : "FAIL", name, value, bound);
    failed_ |= !ok;
  }
  void warn(const std::string& name, double value, const std::string& why) {
    line("WARN", name, value, why);
  }
  void skip(const std::string& name, const std::string& why) {
    std::cout << "SKIP  " << std::left << std::setw(28) << name << why << "\n";
  }
  bool failed() const { return failed_; }

 private:
  void line(const char* status, const std::string& name, double value, const std::string& bound) {
    std::cout << status << "  " << std::left << std::setw(28) << name << std::setw(14)
              << std::setprecision(6) << value << bound << "\n";
  }
  bool failed_ = false;
};

int cmd_validate(const RunConfig& rc) {
  const ExperimentConfig& e = rc.experiment;
  Report r;
  const LinearStateSpace<double> ss = assemble<double>(e.params, e.N, disturbance_profiles(e));
  const double plant_margin = -spectral_abscissa(ss.A);
  const bool plant_stable = plant_margin > 1e-9;
  if (plant_stable)
    r.check("plant_margin", true, plant_margin, "> 0");
  else if (e.params.gamma == 0)
    r.warn("plant_margin", plant_margin, "undamped beams: margin is zero");
  else
    r.check("plant_margin", false, plant_margin, "> 0");

  const double colloc = (ss.H * ss.B - ss.C.transpose()).cwiseAbs().maxCoeff();
  r.check("collocation_HB_eq_Ct", colloc < 1e-12, colloc, "< 1e-12");
  const MatrixXd sym = ss.A.transpose() * ss.H + ss.H * ss.A;
  const double top = Eigen::SelfAdjointEigenSolver<MatrixXd>((sym + sym.transpose()) / 2)
                         .eigenvalues()
                         .maxCoeff();
  const double tol = 1e-10 * std::max(1.0, ss.H.cwiseAbs().maxCoeff());
  r.check("dissipation_AtH_HA", top < tol, top, "<= 0 (1e-10 rel)");

  const ControllerRealization passive = build_passive_controller(e.freqs, e.c1, e.c2);
  const double skew = (passive.G1 + passive.G1.transpose()).cwiseAbs().maxCoeff() +
                      (passive.K + passive.G2.transpose()).cwiseAbs().maxCoeff();
  r.check("passive_structure", skew == 0, skew, "== 0");

  if (!plant_stable) {
    for (const char* name : {"transfer_oracle", "sylvester_residual", "care_residual",
                             "closed_loop_margin", "regulation_zeros"})
      r.skip(name, "requires an exponentially stable plant");
    return r.failed() ? kExitRuntime : 0;
  }

  const auto rows = transfer_error_report<double>(e.params, {e.N}, rc.analyze.transfer_omegas);
  r.check("transfer_oracle", rows[0].max_relative_error < 1e-3, rows[0].max_relative_error,
          "< 1e-3");
  const SylvesterSolution syl = solve_sylvester_H(ss, e.freqs);
  r.check("sylvester_residual", syl.relative_residual < 1e-8, syl.relative_residual, "< 1e-8");
  if (e.controller == ControllerKind::Observer) {
    const ObserverDesign d = build_observer_controller(ss, e.freqs, e.q0, e.r0);
    r.check("care_residual", d.care.residual < 1e-8, d.care.residual, "< 1e-8");
  } else {
    r.skip("care_residual", "passive controller selected");
  }
  const ExperimentResult res = run_experiment(e, /*simulate=*/false);
  r.check("closed_loop_margin", res.stable, res.margin, "> 0");
  double worst = res.stable ? 0.0 : INFINITY;
  for (const auto& z : res.regulation) worst = std::max(worst, z.residual);
  r.check("regulation_zeros", worst < 1e-8, worst, "< 1e-8");
  return r.failed() ? kExitRuntime : 0;
}

int cmd_simulate(const RunConfig& rc) {
  const ExperimentResult res = run_experiment(rc.experiment, true);
  write_manifest(rc);
  if (!res.stable) {
    std::cerr << "closed loop is unstable: margin " << res.margin << " (rightmost eigenvalue "
              << res.rightmost.real() << (res.rightmost.imag() < 0 ? "" : "+")
              << res.rightmost.imag() << "i)\n";
    return kExitRuntime;
  }
  {
    auto os = open_output(rc, "trace.csv");
    write_trace_csv(*res.trace, os);
  }
  auto os = open_output(rc, "summary.csv");
  os << "margin,l2sq,decay_rate,floored\n" << std::setprecision(17) << res.margin << ','
     << res.metrics.l2sq << ',' << res.metrics.decay_rate << ','
     << (res.metrics.floored ? "true" : "false") << '\n';
  std::cout << std::setprecision(6) << "margin " << res.margin << "  l2sq " << res.metrics.l2sq
            << "  decay_rate " << res.metrics.decay_rate << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& rc, const Options& o) {
  if (o.param.empty()) throw ConfigError("sweep requires --param");
  std::string grid_text = o.grid;
  if (grid_text.empty()) {
    const auto it = rc.sweep_grids.find(o.param);
    if (it == rc.sweep_grids.end()) throw ConfigError("no default grid for '" + o.param + "'");
    grid_text = it->second;
  }
  const SweepResult res = sweep(rc.experiment, o.param, parse_grid(grid_text), rc.workers);
  write_manifest(rc);
  auto os = open_output(rc, "sweep_" + o.param + ".csv");
  write_sweep_csv(res, os);
  for (const SweepPoint& p : res.points)
    if (!p.error.empty()) std::cerr << o.param << "=" << p.value << ": " << p.error << "\n";
  return 0;
}

int cmd_analyze(const RunConfig& rc) {
  const ExperimentConfig& e = rc.experiment;
  const AnalyzeOptions& a = rc.analyze;
  write_manifest(rc);
  {
    const auto rows = transfer_error_report<double>(e.params, a.Ns, a.transfer_omegas);
    auto os = open_output(rc, "transfer_error.csv");
    os << "N,max_rel_error,worst_omega\n" << std::setprecision(17);
    for (const auto& row : rows)
      os << row.N << ',' << row.max_relative_error << ',' << row.worst_omega << '\n';
  }
  const LinearStateSpace<double> ss = assemble<double>(e.params, e.N, disturbance_profiles(e));
  std::vector<double> grid(a.resolvent_n);
  for (int i = 0; i < a.resolvent_n; ++i)
    grid[i] = a.resolvent_lo + (a.resolvent_hi - a.resolvent_lo) * i / (a.resolvent_n - 1);
  const auto energy = resolvent_norm_scan(ss, grid);
  const auto plain = resolvent_norm_scan(ss.A, grid);
  {
    auto os = open_output(rc, "resolvent.csv");
    os << "omega,norm_energy,norm_2\n" << std::setprecision(17);
    for (std::size_t i = 0; i < grid.size(); ++i)
      os << grid[i] << ',' << energy[i].norm << ',' << plain[i].norm << '\n';
  }
  std::vector<double> igrid(a.interconnection_n);
  for (int i = 0; i < a.interconnection_n; ++i)
    igrid[i] = a.interconnection_lo *
               std::pow(a.interconnection_hi / a.interconnection_lo,
                        static_cast<double>(i) / (a.interconnection_n - 1));
  const InterconnectionBound qb = interconnection_lower_bound(e.params, igrid);
  std::vector<double> mgrid;
  for (double w : igrid)
    if (w >= 0.1 && w <= 100) mgrid.push_back(w);
  auto os = open_output(rc, "analysis_summary.csv");
  os << "quantity,value\n" << std::setprecision(17);
  os << "plant_margin," << -spectral_abscissa(ss.A) << '\n';
  os << "beam_growth_constant," << (mgrid.empty() ? NAN : beam_growth_constant(e.params, mgrid))
     << '\n';
  os << "q1_min," << qb.q1_min << '\n' << "q2_min," << qb.q2_min << '\n';
  double peak = 0, peak_w = 0;
  for (const auto& s : energy)
    if (s.norm > peak) {
      peak = s.norm;
      peak_w = s.omega;
    }
  os << "resolvent_max," << peak << '\n' << "resolvent_argmax," << peak_w << '\n';
  std::cout << "wrote analysis outputs to " << rc.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible satellite simulation and robust regulation toolkit"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--perturb", o.perturb, "plant-only scaling, e.g. gamma=0.9,m=1.1");
    sub->add_option("--workers", o.workers, "sweep worker threads (0 = all cores)");
  };
  CLI::App* validate = app.add_subcommand("validate", "run the invariant checks");
  CLI::App* simulate = app.add_subcommand("simulate", "simulate the closed loop");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one controller parameter");
  CLI::App* analyze = app.add_subcommand("analyze", "transfer-error report and resolvent scan");
  for (CLI::App* sub : {validate, simulate, sweep_cmd, analyze}) common(sub);
  sweep_cmd->add_option("--param", o.param, "c1 | c2 | q0 | r0")->required();
  sweep_cmd->add_option("--grid", o.grid, "lo:hi:n[:log]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const RunConfig rc = resolve(o);
    if (*validate) return cmd_validate(rc);
    if (*simulate) return cmd_simulate(rc);
    if (*sweep_cmd) return cmd_sweep(rc, o);
    if (*analyze) return cmd_analyze(rc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
