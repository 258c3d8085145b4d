#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace flexsat {

/// Complex counterpart of a real scalar type. Specialized for extended
/// precision backends whose complex type is not std::complex.
template <typename Scalar>
struct complex_of {
  using type = std::complex<Scalar>;
};

template <typename Scalar>
using Complex = typename complex_of<Scalar>::type;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using ComplexMatrixX = MatrixX<Complex<Scalar>>;
template <typename Scalar>
using ComplexMatrix2 = Matrix2<Complex<Scalar>>;

using Eigen::MatrixXd;
using Eigen::VectorXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

/// Beam and hub constants. Defaults are the unit-parameter setup with
/// damping 5 used in the reference experiments.
template <typename Scalar = double>
struct PhysicalParams {
  Scalar rho{1};    ///< linear density [kg/m]
  Scalar a{1};      ///< cross-section area [m^2]
  Scalar E{1};      ///< Young modulus [Pa]
  Scalar I{1};      ///< second moment of area [m^4]
  Scalar gamma{5};  ///< viscous damping [N s / m^2]
  Scalar m{1};      ///< hub mass [kg]
  Scalar I_m{1};    ///< hub moment of inertia [kg m^2]

  Scalar rho_a() const { return rho * a; }
  Scalar EI() const { return E * I; }

  /// Throws std::invalid_argument unless every field is strictly positive.
  /// `allow_zero_damping` admits gamma == 0 (conservative beams).
  void validate(bool allow_zero_damping = false) const {
    auto check = [](const Scalar& v, const char* name) {
      if (!(v > Scalar(0)))
        throw std::invalid_argument(std::string("parameter '") + name +
                                    "' must be strictly positive");
    };
    check(rho, "rho");
    check(a, "a");
    check(E, "E");
    check(I, "I");
    check(m, "m");
    check(I_m, "I_m");
    if (allow_zero_damping) {
      if (gamma < Scalar(0))
        throw std::invalid_argument("parameter 'gamma' must be non-negative");
    } else {
      check(gamma, "gamma");
    }
  }

  template <typename Other>
  PhysicalParams<Other> cast() const {
    return {Other(rho), Other(a), Other(E), Other(I), Other(gamma), Other(m), Other(I_m)};
  }
};

/// Imaginary unit in the complex type associated with `Scalar`.
template <typename Scalar>
Complex<Scalar> imag_unit() {
  return Complex<Scalar>(Scalar(0), Scalar(1));
}

}  // namespace flexsat
