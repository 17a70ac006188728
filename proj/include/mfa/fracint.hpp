#pragma once

#include <span>

#include "mfa/dwt.hpp"

namespace mfa {

// Wavelet-domain integration of order s: every octave-j coefficient is
// multiplied by 2^{s j}, which raises all regularity exponents by s. Masks and
// level layout are kept; the cumulative order is recorded on the result.
CoefficientPyramid pseudo_fractional_integrate(const CoefficientPyramid& pyramid, double s);

// Smallest non-negative multiple of 0.5 that makes min(h_min) + s strictly positive.
double select_integration_order(std::span<const double> hmin_values);

}  // namespace mfa
