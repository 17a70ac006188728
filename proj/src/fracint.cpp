#include "mfa/fracint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfa/error.hpp"

namespace mfa {

CoefficientPyramid pseudo_fractional_integrate(const CoefficientPyramid& pyramid, double s) {
    require(std::isfinite(s), ErrorKind::invalid_argument, "integration order must be finite");
    std::vector<PyramidLevel> levels(pyramid.levels().begin(), pyramid.levels().end());
    for (PyramidLevel& lv : levels) {
        const double g = std::exp2(s * lv.j);
        for (auto& band : lv.bands)
            for (double& c : band) c *= g;
    }
    CoefficientPyramid out(pyramid.dim(), pyramid.boundary(), pyramid.filter_order(), std::move(levels),
                           pyramid.coarse(), pyramid.coarse_rows(), pyramid.coarse_cols(),
                           pyramid.integration_order() + s);
    out.warnings = pyramid.warnings;
    // The shift of exponents is only guaranteed for wavelets smoother than s + 1.
    if (s > 0.0 && pyramid.filter_order() <= out.integration_order() + 1.0) {
        std::ostringstream msg;
        msg << "filter order " << pyramid.filter_order() << " is low for integration order "
            << out.integration_order() << "; use an order above " << out.integration_order() + 1.0;
        out.warnings.push_back(msg.str());
    }
    return out;
}

double select_integration_order(std::span<const double> hmin_values) {
    require(!hmin_values.empty(), ErrorKind::invalid_argument, "no h_min values given");
    for (double h : hmin_values)
        require(std::isfinite(h), ErrorKind::invalid_argument, "non-finite h_min value");
    const double lo = *std::min_element(hmin_values.begin(), hmin_values.end());
    if (lo > 0.0) return 0.0;
    double s = 0.5 * std::ceil(-lo / 0.5);
    if (lo + s <= 0.0) s += 0.5;
    return s;
}

}  // namespace mfa
