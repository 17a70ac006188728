#pragma once

#include <span>

namespace mfa {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Weighted least-squares line y = intercept + slope * x. Needs two distinct x
// values with positive weight.
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w);

}  // namespace mfa
