#include "mfa/synth.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include "mfa/error.hpp"

namespace mfa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place forward complex FFT of a 1D (rows = 1) or 2D row-major array.
void fft_forward(std::vector<std::complex<double>>& data, std::size_t rows, std::size_t cols) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = rows == 1 ? fftw_plan_dft_1d(static_cast<int>(cols), ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE)
                         : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), ptr, ptr,
                                            FFTW_FORWARD, FFTW_ESTIMATE);
    }
    require(plan != nullptr, ErrorKind::internal, "FFT planning failed");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Gaussian vector with the circulant covariance whose first row is `row`.
std::vector<double> circulant_gaussian(const std::vector<double>& row, std::size_t rows,
                                       std::size_t cols, Philox& rng) {
    std::vector<std::complex<double>> lam(row.begin(), row.end());
    fft_forward(lam, rows, cols);
    double top = 0.0;
    for (const auto& v : lam) top = std::max(top, std::abs(v.real()));
    const double m = static_cast<double>(rows * cols);
    std::vector<std::complex<double>> w(lam.size());
    for (std::size_t k = 0; k < lam.size(); ++k) {
        const double l = lam[k].real();
        require(l >= -1e-9 * top, ErrorKind::internal, "circulant embedding is not positive semidefinite");
        const double a = std::sqrt(std::max(l, 0.0) / m);
        const double re = rng.normal(), im = rng.normal();
        w[k] = {a * re, a * im};
    }
    fft_forward(w, rows, cols);
    std::vector<double> out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) out[k] = w[k].real();
    return out;
}

Signal fbm_1d(double H, std::size_t n, Philox& rng) {
    const std::size_t m = 2 * n;
    const double a = 2.0 * H;
    auto gamma = [a](double k) {
        return 0.5 * (std::pow(std::abs(k + 1.0), a) - 2.0 * std::pow(std::abs(k), a) +
                      std::pow(std::abs(k - 1.0), a));
    };
    std::vector<double> row(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = gamma(static_cast<double>(k));
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
    const auto g = circulant_gaussian(row, 1, m, rng);
    std::vector<double> x(n);
    const double scale = std::pow(static_cast<double>(n), -H);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = acc * scale;
        acc += g[k];
    }
    return Signal::line(std::move(x), 1.0 / static_cast<double>(n));
}

Signal fbm_2d(double H, std::size_t n, Philox& rng) {
    require(H <= 0.75, ErrorKind::invalid_argument,
            "2D fBm synthesis supports H <= 0.75 (embedding with R = 2)");
    const double alpha = 2.0 * H, R = 2.0;
    const double beta = alpha * (2.0 - alpha) / (3.0 * R * (R * R - 1.0));
    const double c2 = 0.5 * (alpha - beta * (R - 1.0) * (R - 1.0) * (R + 2.0));
    const double c0 = beta * std::pow(R - 1.0, 3.0) + 1.0 - c2;
    auto cov = [&](double r) {
        if (r <= 1.0) return c0 - std::pow(r, alpha) + c2 * r * r;
        if (r <= R) return beta * std::pow(R - r, 3.0) / r;
        return 0.0;
    };
    // Torus of side 2R so that translates of the compactly supported covariance do not overlap.
    const std::size_t m = 4 * n;
    std::vector<double> row(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        const double di = static_cast<double>(std::min(i, m - i)) / static_cast<double>(n);
        for (std::size_t k = 0; k < m; ++k) {
            const double dk = static_cast<double>(std::min(k, m - k)) / static_cast<double>(n);
            row[i * m + k] = cov(std::hypot(di, dk));
        }
    }
    const auto z = circulant_gaussian(row, m, m, rng);
    const double x1 = rng.normal(), x2 = rng.normal();
    const double tilt = std::sqrt(2.0 * c2);
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double u = static_cast<double>(i) / static_cast<double>(n);
            const double v = static_cast<double>(k) / static_cast<double>(n);
            out[i * n + k] = z[i * m + k] - z[0] + tilt * (u * x1 + v * x2);
        }
    return Signal::image(n, n, std::move(out), 1.0 / static_cast<double>(n));
}

std::vector<double> cascade_masses(const CascadeSpec& spec, Philox& rng) {
    const int c = spec.branching;
    const MultiplierLaw& law = spec.law;
    std::vector<double> mass{1.0};
    for (int level = 1; level <= spec.depth; ++level) {
        std::vector<double> next(mass.size() * static_cast<std::size_t>(c));
        for (std::size_t k = 0; k < mass.size(); ++k) {
            for (int i = 0; i < c; ++i) {
                const double w = draw_multiplier(law, c, i, rng);
                next[k * static_cast<std::size_t>(c) + static_cast<std::size_t>(i)] = mass[k] * w / c;
            }
        }
        mass = std::move(next);
    }
    return mass;
}

void check_cascade(const CascadeSpec& spec) {
    require(spec.branching >= 2, ErrorKind::invalid_argument, "branching number must be at least 2");
    require(spec.depth >= 1, ErrorKind::invalid_argument, "cascade depth must be positive");
    require(std::pow(static_cast<double>(spec.branching), spec.depth) <= std::pow(2.0, 24),
            ErrorKind::invalid_argument, "cascade has more than 2^24 cells");
    const MultiplierLaw& law = spec.law;
    switch (law.kind) {
        case MultiplierLaw::Kind::lognormal:
            require(law.sigma2 >= 0.0 && std::abs(law.m + 0.5 * law.sigma2) < 1e-12,
                    ErrorKind::invalid_argument, "lognormal multipliers need m = -sigma2/2 for mean one");
            break;
        case MultiplierLaw::Kind::logpoisson:
            require(law.lambda >= 0.0 && law.beta > 0.0, ErrorKind::invalid_argument,
                    "log-Poisson multipliers need lambda >= 0 and beta > 0");
            require(std::abs(law.gamma - law.lambda * (1.0 - law.beta)) < 1e-12,
                    ErrorKind::invalid_argument, "log-Poisson multipliers need gamma = lambda (1 - beta)");
            break;
        case MultiplierLaw::Kind::deterministic: {
            require(law.fractions.size() == static_cast<std::size_t>(spec.branching),
                    ErrorKind::invalid_argument, "one mass fraction per child is required");
            double sum = 0.0;
            for (double f : law.fractions) {
                require(f >= 0.0, ErrorKind::invalid_argument, "multipliers must be non-negative");
                sum += f;
            }
            require(std::abs(sum - 1.0) < 1e-12, ErrorKind::invalid_argument,
                    "mass fractions must sum to one");
            break;
        }
    }
}

}  // namespace

double draw_multiplier(const MultiplierLaw& law, int branching, int child, Philox& rng) {
    switch (law.kind) {
        case MultiplierLaw::Kind::lognormal:
            return std::exp(law.m + std::sqrt(law.sigma2) * rng.normal());
        case MultiplierLaw::Kind::logpoisson:
            return std::pow(law.beta, static_cast<double>(rng.poisson(law.lambda))) * std::exp(law.gamma);
        case MultiplierLaw::Kind::deterministic:
            return branching * law.fractions[static_cast<std::size_t>(child)];
    }
    return 1.0;
}

Signal synth_fbm(double H, std::size_t n, int dim, std::uint64_t seed, std::uint64_t stream) {
    require(H > 0.0 && H < 1.0, ErrorKind::invalid_argument, "fBm needs 0 < H < 1");
    require(is_power_of_two(n), ErrorKind::invalid_argument, "fBm length must be a power of two");
    require(dim == 1 || dim == 2, ErrorKind::invalid_argument, "fBm dimension must be 1 or 2");
    Philox rng(seed, stream);
    return dim == 1 ? fbm_1d(H, n, rng) : fbm_2d(H, n, rng);
}

GroundTruth fbm_truth(double H, int dim) {
    GroundTruth t;
    t.dim = dim;
    t.zeta = [H](double p) { return p * H; };
    t.spectrum = [H, dim](double h) { return std::abs(h - H) < 1e-12 ? static_cast<double>(dim) : kNegInf; };
    t.hmin = H;
    t.description = "fBm, monofractal";
    return t;
}

std::pair<int, int> weierstrass_term_range(double a, double H, WeierstrassVariant variant) {
    require(a > 1.0 && std::isfinite(a), ErrorKind::invalid_argument, "Weierstrass needs a > 1");
    const double hmax = variant == WeierstrassVariant::sin ? 1.0 : 2.0;
    require(H > 0.0 && H < hmax, ErrorKind::invalid_argument,
            "Weierstrass H outside the convergent range of this variant");
    constexpr double tol = 1e-14;
    // Positive side: |term| <= amp a^{-H n}; negative side: |term| <= a^{(q - H) n} / q!
    // with q = 1 for sin and q = 2 for cos - 1 (x < 1).
    const double amp = variant == WeierstrassVariant::sin ? 1.0 : 2.0;
    const int hi = static_cast<int>(std::ceil(std::log(amp / tol) / (H * std::log(a))));
    const double q = variant == WeierstrassVariant::sin ? 1.0 : 2.0;
    const double fact = variant == WeierstrassVariant::sin ? 1.0 : 2.0;
    const int lo = static_cast<int>(std::ceil(std::log(1.0 / (fact * tol)) / ((q - H) * std::log(a))));
    require(hi + lo <= 100000, ErrorKind::invalid_argument,
            "Weierstrass series converges too slowly for these parameters");
    return {lo, hi};
}

Signal synth_weierstrass(double a, double H, std::size_t n, WeierstrassVariant variant) {
    require(n >= 2, ErrorKind::invalid_argument, "need at least two samples");
    const auto [lo, hi] = weierstrass_term_range(a, H, variant);
    std::vector<double> x(n, 0.0);
    for (int k = -lo; k <= hi; ++k) {
        const double freq = std::pow(a, k);
        const double amp = std::pow(a, -H * k);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = freq * static_cast<double>(i) / static_cast<double>(n);
            if (variant == WeierstrassVariant::sin) {
                x[i] += amp * std::sin(t);
            } else {
                const double s = std::sin(0.5 * t);
                x[i] -= amp * 2.0 * s * s;
            }
        }
    }
    return Signal::line(std::move(x), 1.0 / static_cast<double>(n));
}

MultiplierLaw MultiplierLaw::lognormal(double sigma2) {
    MultiplierLaw l;
    l.kind = Kind::lognormal;
    l.sigma2 = sigma2;
    l.m = -0.5 * sigma2;
    return l;
}

MultiplierLaw MultiplierLaw::logpoisson(double lambda, double beta) {
    MultiplierLaw l;
    l.kind = Kind::logpoisson;
    l.lambda = lambda;
    l.beta = beta;
    l.gamma = lambda * (1.0 - beta);
    return l;
}

MultiplierLaw MultiplierLaw::she_leveque() { return logpoisson(2.0 * std::numbers::ln2, 2.0 / 3.0); }

MultiplierLaw MultiplierLaw::deterministic(std::vector<double> fractions) {
    MultiplierLaw l;
    l.kind = Kind::deterministic;
    l.fractions = std::move(fractions);
    return l;
}

double MultiplierLaw::log_moment(double q, int branching) const {
    const double lc = std::log(static_cast<double>(branching));
    switch (kind) {
        case Kind::lognormal:
            return (q * m + 0.5 * q * q * sigma2) / lc;
        case Kind::logpoisson:
            return (q * gamma + lambda * (std::pow(beta, q) - 1.0)) / lc;
        case Kind::deterministic: {
            double s = 0.0;
            for (double f : fractions)
                if (f > 0.0) s += std::pow(branching * f, q);
            return std::log(s / branching) / lc;
        }
    }
    return 0.0;
}

Synthesized synth_cascade(const CascadeSpec& spec, std::uint64_t seed, std::uint64_t stream) {
    check_cascade(spec);
    Philox rng(seed, stream);
    auto mass = cascade_masses(spec, rng);
    const double cells = static_cast<double>(mass.size());
    Synthesized out{Signal::line(std::move(mass), 1.0 / cells), {}};
    const MultiplierLaw law = spec.law;
    const int c = spec.branching;
    out.truth.dim = 1;
    out.truth.zeta = [law, c](double q) { return -law.log_moment(q, c); };
    out.truth.spectrum = numeric_spectrum(out.truth.zeta, 1);
    out.truth.description = "cascade masses read as a density";
    return out;
}

LognormalCalibration calibrate_lognormal(double c1, double c2) {
    require(c2 < 0.0, ErrorKind::invalid_argument, "lognormal calibration needs c2 < 0");
    // Density of the mean-one cascade: zeta(q) = (q - q^2) sigma2 / (2 ln 2),
    // so c2 = -sigma2 / ln 2 and c1 = -c2 / 2 before integration.
    LognormalCalibration cal;
    cal.sigma2 = -c2 * std::numbers::ln2;
    cal.integration = c1 + 0.5 * c2;
    return cal;
}

Synthesized synth_fbm_mf_time(double H, const CascadeSpec& cascade, std::size_t n,
                              std::uint64_t seed, std::uint64_t stream) {
    require(H > 0.0 && H < 1.0, ErrorKind::invalid_argument, "fBm needs 0 < H < 1");
    require(is_power_of_two(n), ErrorKind::invalid_argument, "length must be a power of two");
    check_cascade(cascade);
    const double cells_per_sample = std::pow(static_cast<double>(cascade.branching), cascade.depth) /
                                    static_cast<double>(n);
    require(cells_per_sample <= 16.0, ErrorKind::invalid_argument,
            "cascade depth exceeds the 16x oversampled fBm grid");

    Philox rng(seed, stream);
    const std::size_t fine = 16 * n;
    const Signal b = fbm_1d(H, fine, rng);
    const auto mass = cascade_masses(cascade, rng);
    std::vector<double> cdf(mass.size() + 1, 0.0);
    for (std::size_t k = 0; k < mass.size(); ++k) cdf[k + 1] = cdf[k] + mass[k];
    const double total = cdf.back();
    require(total > 0.0, ErrorKind::invalid_argument, "cascade has zero total mass");

    std::vector<double> x(n);
    const double cells = static_cast<double>(mass.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double pos = static_cast<double>(k) / static_cast<double>(n) * cells;
        const std::size_t cell = std::min(mass.size() - 1, static_cast<std::size_t>(pos));
        const double F = (cdf[cell] + (pos - static_cast<double>(cell)) * mass[cell]) / total;
        const auto idx = std::min(fine - 1, static_cast<std::size_t>(std::llround(F * static_cast<double>(fine))));
        x[k] = b[idx];
    }

    Synthesized out{Signal::line(std::move(x), 1.0 / static_cast<double>(n)), {}};
    const MultiplierLaw law = cascade.law;
    const int c = cascade.branching;
    out.truth.dim = 1;
    out.truth.zeta = [law, c, H](double p) {
        const double q = p * H;
        return q - law.log_moment(q, c);
    };
    out.truth.spectrum = numeric_spectrum(out.truth.zeta, 1);
    out.truth.description = "fBm in multifractal time";
    return out;
}

double symmetric_stable(double alpha, Philox& rng) {
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    if (alpha == 1.0) return std::tan(v);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

Synthesized synth_levy_stable(double alpha, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    require(alpha > 1.0 && alpha <= 2.0, ErrorKind::invalid_argument, "stable index must lie in (1, 2]");
    require(n >= 2, ErrorKind::invalid_argument, "need at least two samples");
    Philox rng(seed, stream);
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) x[k] = x[k - 1] + symmetric_stable(alpha, rng);
    Synthesized out{Signal::line(std::move(x), 1.0 / static_cast<double>(n)), {}};
    out.truth.dim = 1;
    out.truth.zeta = [alpha](double p) { return std::min(p / alpha, 1.0); };
    out.truth.spectrum = [alpha](double h) {
        return h >= 0.0 && h <= 1.0 / alpha ? alpha * h : kNegInf;
    };
    out.truth.hmin = 0.0;
    out.truth.description = "symmetric stable Levy motion";
    return out;
}

Signal transform_square(const Signal& signal) {
    std::vector<double> y(signal.samples().begin(), signal.samples().end());
    for (double& v : y) v *= v;
    return signal.dim() == 1 ? Signal::line(std::move(y), signal.spacing())
                             : Signal::image(signal.rows(), signal.cols(), std::move(y), signal.spacing());
}

GroundTruth squared_fbm_truth(double H) {
    GroundTruth t;
    t.dim = 1;
    t.zeta = [H](double p) { return std::min(p * H, 2.0 * H * p + H); };
    t.spectrum = [H](double h) {
        if (h < H - 1e-12 || h > 2.0 * H + 1e-12) return kNegInf;
        return 1.0 - (h - H);
    };
    t.hmin = H;
    t.description = "square of fBm, bi-Holder (concave hull)";
    return t;
}

std::function<double(double)> numeric_spectrum(std::function<double(double)> zeta, int dim,
                                               double p_max, double dp) {
    std::vector<std::pair<double, double>> pts;
    const int steps = static_cast<int>(std::round(p_max / dp));
    for (int i = -steps; i <= steps; ++i) {
        const double p = i * dp;
        pts.emplace_back(p, zeta(p));
    }
    return [pts = std::move(pts), dim](double h) {
        double best = dim;
        for (const auto& [p, z] : pts) best = std::min(best, dim + h * p - z);
        return best;
    };
}

}  // namespace mfa
