#pragma once

// Closed-form frequency-domain and eigenstructure formulas for the hub-beam
// system. Everything here is a pure function; templated on the real scalar so
// the same code runs in double and in extended precision.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "flexsat/legendre.hpp"
#include "flexsat/types.hpp"

namespace flexsat::analytic {

/// Below this |omega| the dedicated zero-frequency formulas are used.
inline constexpr double kZeroFrequencyThreshold = 1e-8;

template <typename Scalar>
bool is_zero_frequency(const Scalar& omega) {
  using std::abs;
  return abs(omega) < Scalar(kZeroFrequencyThreshold);
}

/// Principal fourth root of (rho a / EI) (omega^2 - i gamma omega / rho a).
template <typename Scalar>
Complex<Scalar> alpha(const Scalar& omega, const PhysicalParams<Scalar>& p) {
  using std::sqrt;
  const Complex<Scalar> arg(omega * omega * p.rho_a() / p.EI(), -p.gamma * omega / p.EI());
  if (omega == Scalar(0)) return Complex<Scalar>(Scalar(0), Scalar(0));
  // sqrt(sqrt(.)) of the principal branch is the principal fourth root.
  return sqrt(sqrt(arg));
}

/// Frequency-dependent constants of the beam boundary value problem.
///
/// `c1`..`c5` are stored scaled by exp(-alpha) so they stay finite for large
/// |omega|; the ratios `c1w`..`c4w` are scale-free.
template <typename Scalar>
struct FrequencyConstants {
  Scalar omega{};
  Complex<Scalar> alpha{};
  Complex<Scalar> c1{}, c2{}, c3{}, c4{}, c5{};
  Complex<Scalar> c1w{}, c2w{}, c3w{}, c4w{};
};

template <typename Scalar>
FrequencyConstants<Scalar> frequency_constants(const Scalar& omega,
                                               const PhysicalParams<Scalar>& p) {
  using std::cos;
  using std::exp;
  using std::sin;
  using C = Complex<Scalar>;
  if (is_zero_frequency(omega))
    throw std::domain_error("frequency_constants: omega = 0 uses the closed forms");
  FrequencyConstants<Scalar> fc;
  fc.omega = omega;
  fc.alpha = alpha(omega, p);
  const C one(Scalar(1), Scalar(0));
  const C two(Scalar(2), Scalar(0));
  const C e = exp(-fc.alpha);  // |e| < 1 since Re alpha > 0
  const C e2 = e * e;
  const C ca = cos(fc.alpha);
  const C sa = sin(fc.alpha);
  fc.c1 = e + (ca * (one + e2) + sa * (one - e2)) / two;
  fc.c2 = two * e + ca * (one + e2);
  fc.c3 = (one - e2) / two + e * sa;
  fc.c4 = (ca * (one - e2) - sa * (one + e2)) / two;
  fc.c5 = (one + e2) / two + e * ca;
  fc.c1w = fc.c1 / fc.c2;
  fc.c2w = (fc.c2 * ca * e - fc.c1 * fc.c5) / (fc.c2 * fc.c3);
  fc.c3w = fc.c4 / fc.c2;
  fc.c4w = (fc.c2 * sa * e + fc.c4 * fc.c5) / (fc.c2 * fc.c3);
  return fc;
}

/// Transfer function of the combined two-beam boundary system, mapping hub
/// velocities to the reaction force and torque the beams exert on the hub.
template <typename Scalar>
ComplexMatrix2<Scalar> transfer_beam(const Scalar& omega, const PhysicalParams<Scalar>& p) {
  using C = Complex<Scalar>;
  ComplexMatrix2<Scalar> out = ComplexMatrix2<Scalar>::Zero();
  if (is_zero_frequency(omega)) {
    out(0, 0) = C(Scalar(2) * p.gamma, Scalar(0));
    out(1, 1) = C(Scalar(2) * p.gamma / Scalar(3), Scalar(0));
    return out;
  }
  const FrequencyConstants<Scalar> fc = frequency_constants(omega, p);
  const C scale = C(Scalar(4) * p.EI(), Scalar(0)) * fc.alpha / C(Scalar(0), omega);
  out(0, 0) = scale * fc.alpha * fc.alpha * fc.c2w;
  out(1, 1) = scale * fc.c3w;
  return out;
}

/// Rigid hub transfer C_c (i omega)^{-1} B_c. Undefined at omega = 0.
template <typename Scalar>
ComplexMatrix2<Scalar> transfer_rigid(const Scalar& omega, const PhysicalParams<Scalar>& p) {
  using C = Complex<Scalar>;
  if (omega == Scalar(0)) throw std::domain_error("transfer_rigid: pole at omega = 0");
  ComplexMatrix2<Scalar> out = ComplexMatrix2<Scalar>::Zero();
  const C inv_iw = C(Scalar(1), Scalar(0)) / C(Scalar(0), omega);
  out(0, 0) = inv_iw / C(p.m, Scalar(0));
  out(1, 1) = inv_iw / C(p.I_m, Scalar(0));
  return out;
}

template <typename Scalar>
ComplexMatrix2<Scalar> hub_input(const PhysicalParams<Scalar>& p) {
  ComplexMatrix2<Scalar> bc = ComplexMatrix2<Scalar>::Zero();
  bc(0, 0) = Complex<Scalar>(Scalar(1) / p.m, Scalar(0));
  bc(1, 1) = Complex<Scalar>(Scalar(1) / p.I_m, Scalar(0));
  return bc;
}

/// I + P_b(i omega) P_c(i omega). Its diagonal entries are the factors whose
/// lower bounds keep the resolvent uniformly bounded at high frequency.
template <typename Scalar>
ComplexMatrix2<Scalar> interconnection_matrix(const Scalar& omega,
                                              const PhysicalParams<Scalar>& p) {
  return ComplexMatrix2<Scalar>::Identity() + transfer_beam(omega, p) * transfer_rigid(omega, p);
}

/// S(i omega) = [i omega I + B_c P_b(i omega) C_c]^{-1} via the two-term
/// perturbation formula (omega != 0) or (B_c P_b(0) C_c)^{-1}.
template <typename Scalar>
ComplexMatrix2<Scalar> s_matrix(const Scalar& omega, const PhysicalParams<Scalar>& p) {
  using std::abs;
  using C = Complex<Scalar>;
  const ComplexMatrix2<Scalar> bc = hub_input(p);
  const ComplexMatrix2<Scalar> pb = transfer_beam(omega, p);
  if (is_zero_frequency(omega)) return (bc * pb).inverse();
  const ComplexMatrix2<Scalar> q = interconnection_matrix(omega, p);
  const C det = q.determinant();
  if (abs(det) <= Eigen::NumTraits<Scalar>::epsilon() * q.cwiseAbs().maxCoeff())
    throw std::runtime_error("s_matrix: I + P_b P_c is numerically singular");
  const C inv_iw = C(Scalar(1), Scalar(0)) / C(Scalar(0), omega);
  const C inv_w2 = C(Scalar(1) / (omega * omega), Scalar(0));
  return ComplexMatrix2<Scalar>::Identity() * inv_iw + inv_w2 * (bc * pb * q.inverse());
}

/// Plant transfer P(i omega) = C_c S(i omega) B_c from hub forces/torques to
/// hub velocities.
template <typename Scalar>
ComplexMatrix2<Scalar> plant_transfer(const Scalar& omega, const PhysicalParams<Scalar>& p) {
  return s_matrix(omega, p) * hub_input(p);
}

// ---------------------------------------------------------------------------
// Clamped-free beam eigenstructure
// ---------------------------------------------------------------------------

/// k-th positive root of cosh(mu) cos(mu) + 1 = 0, k >= 1. Solved in the
/// overflow-free form cos(mu) + sech(mu) = 0 by safeguarded Newton.
template <typename Scalar>
Scalar beam_mu(int k) {
  using std::abs;
  using std::atan;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::tanh;
  if (k < 1) throw std::invalid_argument("beam_mu: k must be >= 1");
  const Scalar pi = Scalar(4) * atan(Scalar(1));
  auto h = [](const Scalar& mu) { return cos(mu) + Scalar(1) / cosh(mu); };
  auto dh = [](const Scalar& mu) { return -sin(mu) - tanh(mu) / cosh(mu); };
  Scalar lo = pi * Scalar(k - 1);
  Scalar hi = pi * Scalar(k);
  Scalar h_lo = h(lo);
  Scalar mu = pi * (Scalar(k) - Scalar(0.5));
  const Scalar tol = Scalar(4) * Eigen::NumTraits<Scalar>::epsilon();
  for (int iter = 0; iter < 200; ++iter) {
    const Scalar hm = h(mu);
    if (hm == Scalar(0)) break;
    if ((hm > Scalar(0)) == (h_lo > Scalar(0))) {
      lo = mu;
      h_lo = hm;
    } else {
      hi = mu;
    }
    Scalar next = mu - hm / dh(mu);
    if (!(next > lo && next < hi)) next = (lo + hi) / Scalar(2);
    const Scalar step = abs(next - mu);
    mu = next;
    if (step <= tol * mu || (hi - lo) <= tol * mu) break;
  }
  return mu;
}

template <typename Scalar>
struct BeamEigenpair {
  int k{};
  Scalar mu{};
  Scalar lambda{};  ///< modal frequency sqrt(EI / rho a) mu^2
  /// Normalization of the exponentially scaled mode bracket so that the mode
  /// has unit energy norm; equals the textbook constant times e^mu / 2.
  Scalar beta{};
};

/// Mode shape of the right (clamped at 0, free at 1) beam in energy variables:
/// f is the momentum-like component, g the moment-like one.
template <typename Scalar>
class BeamMode {
 public:
  BeamMode(int k, const PhysicalParams<Scalar>& p) : params_(p) {
    using std::exp;
    using std::sqrt;
    pair_.k = k;
    pair_.mu = beam_mu<Scalar>(k);
    pair_.lambda = sqrt(p.EI() / p.rho_a()) * pair_.mu * pair_.mu;
    s_ = exp(-pair_.mu);
    cm_ = cos_(pair_.mu);
    sm_ = sin_(pair_.mu);
    a_ = Scalar(1) + s_ * s_ + Scalar(2) * s_ * cm_;
    b_ = Scalar(1) - s_ * s_ - Scalar(2) * s_ * sm_;
    pair_.beta = Scalar(1);
    const auto rule = legendre::gauss_legendre<Scalar>(64, Scalar(0), Scalar(1));
    Scalar integral(0);
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
      const Scalar f = bracket(rule.nodes(i), 0, true);
      const Scalar g = bracket(rule.nodes(i), 0, false);
      integral += rule.weights(i) * (f * f + g * g);
    }
    // ||(f,g)||^2 = beta^2 / (rho a) * integral(F^2 + G^2)
    pair_.beta = sqrt(p.rho_a() / integral);
  }

  const BeamEigenpair<Scalar>& eigenpair() const { return pair_; }

  /// d^order/dxi^order of (f, g) at xi in [0, 1].
  std::pair<Complex<Scalar>, Complex<Scalar>> evaluate(const Scalar& xi, int order = 0) const {
    using std::sqrt;
    using C = Complex<Scalar>;
    const C f(pair_.beta * bracket(xi, order, true), Scalar(0));
    const C g_scale = C(pair_.beta, Scalar(0)) /
                      C(Scalar(0), sqrt(params_.rho_a() * params_.EI()));
    const C g = g_scale * C(bracket(xi, order, false), Scalar(0));
    return {f, g};
  }

 private:
  static Scalar cos_(const Scalar& x) {
    using std::cos;
    return cos(x);
  }
  static Scalar sin_(const Scalar& x) {
    using std::sin;
    return sin(x);
  }

  // Scaled brackets
  //   F = A(cosh z - cos z) - B(sinh z - sin z),
  //   G = A(cosh z + cos z) - B(sinh z + sin z),   z = mu xi,
  // with the growing exponential folded into decaying ones.
  Scalar bracket(const Scalar& xi, int order, bool is_f) const {
    using std::atan;
    using std::cos;
    using std::exp;
    using std::pow;
    using std::sin;
    const Scalar& mu = pair_.mu;
    const Scalar mun = pow_int(mu, order);
    const Scalar sign_n = (order % 2 == 0) ? Scalar(1) : Scalar(-1);
    const Scalar grow = (cm_ + sm_) * exp(-mu * (Scalar(1) - xi)) + exp(-mu * (Scalar(2) - xi));
    const Scalar decay = (Scalar(1) + s_ * (cm_ - sm_)) * exp(-mu * xi);
    const Scalar hyp = mun * (grow + sign_n * decay);
    const Scalar half_pi = Scalar(2) * atan(Scalar(1));
    const Scalar phase = mu * xi + Scalar(order) * half_pi;
    const Scalar trig = mun * (-a_ * cos(phase) + b_ * sin(phase));
    return is_f ? hyp + trig : hyp - trig;
  }

  static Scalar pow_int(const Scalar& x, int n) {
    Scalar r(1);
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  PhysicalParams<Scalar> params_;
  BeamEigenpair<Scalar> pair_;
  Scalar s_{}, cm_{}, sm_{}, a_{}, b_{};
};

template <typename Scalar>
BeamEigenpair<Scalar> beam_eigenpair(int k, const PhysicalParams<Scalar>& p) {
  return BeamMode<Scalar>(k, p).eigenpair();
}

/// (f_k(xi), g_k(xi)) of the normalized k-th mode.
template <typename Scalar>
std::pair<Complex<Scalar>, Complex<Scalar>> beam_eigenfunction(int k, const Scalar& xi,
                                                               const PhysicalParams<Scalar>& p) {
  return BeamMode<Scalar>(k, p).evaluate(xi, 0);
}

}  // namespace flexsat::analytic
