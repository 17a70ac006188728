#include "mfa/regression.hpp"

#include <cmath>

#include "mfa/error.hpp"

namespace mfa {

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w) {
    require(x.size() == y.size() && x.size() == w.size(), ErrorKind::internal,
            "regression inputs differ in length");
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    require(sw > 0.0, ErrorKind::insufficient_scales, "regression has no weight");
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::insufficient_scales, "regression needs two distinct scales");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace mfa
