#pragma once

// Quadruple-precision scalar support. Including this header makes
// boost::multiprecision::float128 usable as the Scalar parameter of the
// templated analytic and discretization code.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "flexsat/types.hpp"

namespace flexsat {

using quad = boost::multiprecision::float128;
using complex_quad = boost::multiprecision::complex128;

template <>
struct complex_of<quad> {
  using type = complex_quad;
};

}  // namespace flexsat
