#include "flexsat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace flexsat {

SignalSpec SignalSpec::zero(Eigen::Index dim) { return {VectorXd::Zero(dim), {}}; }

std::vector<double> SignalSpec::active_frequencies() const {
  std::vector<double> out;
  for (const Term& term : terms)
    if (term.omega > 0 && (term.a.cwiseAbs().maxCoeff() > 0 || term.b.cwiseAbs().maxCoeff() > 0))
      out.push_back(term.omega);
  return out;
}

VectorXd eval_signal(const SignalSpec& spec, double t) {
  VectorXd v = spec.a0;
  for (const auto& term : spec.terms)
    v += term.a * std::cos(term.omega * t) + term.b * std::sin(term.omega * t);
  return v;
}

SignalSpec paper_reference() {
  SignalSpec s{Eigen::Vector2d(1, 2), {}};
  s.terms.push_back({1.0, Eigen::Vector2d(3, 0), Eigen::Vector2d(0, 0)});
  s.terms.push_back({2.0, Eigen::Vector2d(0, 1.5), Eigen::Vector2d(0, 0)});
  s.terms.push_back({5.0, Eigen::Vector2d(0, 0), Eigen::Vector2d(0, -1)});
  return s;
}

SignalSpec paper_disturbance() { return {Eigen::Vector4d(0, 0, 10, 15), {}}; }

MatrixXd matrix_exponential(const MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("matrix_exponential: matrix not square");
  return M.exp();
}

namespace {

// Exosystem state v = (1, cos w1 t, sin w1 t, ...) and the map v -> value.
struct Exosystem {
  std::vector<double> omegas;
  MatrixXd S;
  Eigen::Index dim() const { return 1 + 2 * static_cast<Eigen::Index>(omegas.size()); }
  VectorXd initial() const {
    VectorXd v = VectorXd::Zero(dim());
    v(0) = 1;
    for (std::size_t k = 0; k < omegas.size(); ++k) v(1 + 2 * k) = 1;
    return v;
  }
  MatrixXd output_map(const SignalSpec& spec) const {
    MatrixXd f = MatrixXd::Zero(spec.dim(), dim());
    f.col(0) = spec.a0;
    for (const auto& term : spec.terms) {
      if (term.omega == 0) {
        f.col(0) += term.a;
        continue;
      }
      const auto it = std::find(omegas.begin(), omegas.end(), std::abs(term.omega));
      const Eigen::Index k = it - omegas.begin();
      const double sgn = term.omega < 0 ? -1.0 : 1.0;
      f.col(1 + 2 * k) += term.a;
      f.col(2 + 2 * k) += sgn * term.b;
    }
    return f;
  }
};

Exosystem make_exosystem(const SignalSpec& a, const SignalSpec& b) {
  Exosystem ex;
  for (const SignalSpec* s : {&a, &b})
    for (const auto& term : s->terms)
      if (term.omega != 0) ex.omegas.push_back(std::abs(term.omega));
  std::sort(ex.omegas.begin(), ex.omegas.end());
  ex.omegas.erase(std::unique(ex.omegas.begin(), ex.omegas.end()), ex.omegas.end());
  ex.S = MatrixXd::Zero(ex.dim(), ex.dim());
  for (std::size_t k = 0; k < ex.omegas.size(); ++k) {
    ex.S(1 + 2 * k, 2 + 2 * k) = -ex.omegas[k];
    ex.S(2 + 2 * k, 1 + 2 * k) = ex.omegas[k];
  }
  return ex;
}

}  // namespace

SimulationTrace integrate(const ClosedLoopSystem& cl, const VectorXd& x0, const SignalSpec& yref,
                          const SignalSpec& wd, double T, double dt, const IntegrateOptions& opts) {
  if (!(dt > 0) || !(T >= dt)) throw std::invalid_argument("integrate: need dt > 0 and T >= dt");
  const double ratio = T / dt;
  const long steps = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw std::invalid_argument("integrate: T must be an integer multiple of dt");
  const Eigen::Index n = cl.dim();
  if (x0.size() != n) throw std::invalid_argument("integrate: initial state has wrong dimension");
  if (yref.dim() != 2 || wd.dim() != 4)
    throw std::invalid_argument("integrate: y_ref must be 2-dimensional and w_d 4-dimensional");

  const Exosystem ex = make_exosystem(yref, wd);
  const Eigen::Index nv = ex.dim();
  MatrixXd f(6, nv);
  f.topRows(4) = ex.output_map(wd);
  f.bottomRows(2) = ex.output_map(yref);

  MatrixXd aug = MatrixXd::Zero(n + nv, n + nv);
  aug.topLeftCorner(n, n) = cl.Ae;
  aug.topRightCorner(n, nv) = cl.Be * f;
  aug.bottomRightCorner(nv, nv) = ex.S;
  const MatrixXd phi = matrix_exponential(aug * dt);

  const Eigen::Index samples = steps + 1;
  SimulationTrace tr;
  tr.t.resize(samples);
  tr.y.resize(2, samples);
  tr.e.resize(2, samples);
  tr.u.resize(2, samples);
  tr.energy.resize(samples);
  if (opts.record_states) tr.states.resize(n, samples);

  const MatrixXd ce_full = [&] {
    MatrixXd m(2, n + nv);
    m << cl.Ce, cl.De * f;
    return m;
  }();
  const MatrixXd cy = cl.Ce;
  const MatrixXd f_ref = f.bottomRows(2);
  const MatrixXd u_full = [&] {
    MatrixXd m(2, n + nv);
    m << cl.U_state, cl.U_ref * f_ref;
    return m;
  }();

  VectorXd s(n + nv);
  s << x0, ex.initial();
  for (Eigen::Index i = 0; i < samples; ++i) {
    if (i > 0) s = phi * s;
    if (!s.allFinite()) {
      std::ostringstream msg;
      msg << "integrate: state became non-finite at t = " << static_cast<double>(i) * dt;
      throw std::runtime_error(msg.str());
    }
    const auto x = s.head(n);
    tr.t(i) = static_cast<double>(i) * dt;
    tr.y.col(i) = cy * x;
    tr.e.col(i) = ce_full * s;
    tr.u.col(i) = u_full * s;
    const auto xp = x.head(cl.n_plant);
    tr.energy(i) = 0.5 * xp.dot(cl.H * xp);
    if (opts.record_states) tr.states.col(i) = x;
  }
  return tr;
}

ErrorMetrics error_metrics(const SimulationTrace& trace) {
  const Eigen::Index n = trace.t.size();
  if (n == 0) throw std::invalid_argument("error_metrics: empty trace");
  ErrorMetrics m;
  const VectorXd e2 = trace.e.colwise().squaredNorm().transpose();
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    m.l2sq += 0.5 * (trace.t(i + 1) - trace.t(i)) * (e2(i) + e2(i + 1));

  const double t_end = trace.t(n - 1);
  const double t_start = trace.t(0) + (1.0 - kDecayFitFraction) * (t_end - trace.t(0));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  int floored = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (trace.t(i) < t_start) continue;
    double norm = std::sqrt(e2(i));
    if (norm < kLogFloor) {
      norm = kLogFloor;
      ++floored;
    }
    const double ly = std::log(norm);
    sx += trace.t(i);
    sy += ly;
    sxx += trace.t(i) * trace.t(i);
    sxy += trace.t(i) * ly;
    ++count;
  }
  m.floored = floored > 0;
  const double den = count * sxx - sx * sx;
  if (floored == count || count < 2 || den <= 0) {
    m.decay_rate = 0;
  } else {
    m.decay_rate = (count * sxy - sx * sy) / den;
  }
  return m;
}

double max_error_norm(const SimulationTrace& trace, double t0, double t1) {
  double m = 0;
  for (Eigen::Index i = 0; i < trace.t.size(); ++i)
    if (trace.t(i) >= t0 - 1e-12 && trace.t(i) <= t1 + 1e-12) m = std::max(m, trace.e.col(i).norm());
  return m;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& os) {
  os << "t,y1,y2,e1,e2,u1,u2,energy\n";
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < trace.t.size(); ++i) {
    os << trace.t(i) << ',' << trace.y(0, i) << ',' << trace.y(1, i) << ',' << trace.e(0, i) << ','
       << trace.e(1, i) << ',' << trace.u(0, i) << ',' << trace.u(1, i) << ',' << trace.energy(i)
       << '\n';
  }
}

}  // namespace flexsat
