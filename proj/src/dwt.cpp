#include "mfa/dwt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "mfa/error.hpp"

namespace mfa {

namespace {

using cld = std::complex<long double>;

long double binomial(int n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
    return r;
}

// Roots of P(y) = sum_{k<N} C(N-1+k, k) y^k, the Daubechies polynomial.
std::vector<cld> daubechies_polynomial_roots(int n) {
    const int degree = n - 1;
    std::vector<long double> coeff(static_cast<std::size_t>(degree + 1));
    for (int k = 0; k <= degree; ++k) coeff[static_cast<std::size_t>(k)] = binomial(n - 1 + k, k);

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    const long double lead = coeff[static_cast<std::size_t>(degree)];
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i)
        companion(i, degree - 1) = static_cast<double>(-coeff[static_cast<std::size_t>(i)] / lead);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto eig = solver.eigenvalues();

    std::vector<cld> roots;
    roots.reserve(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) {
        cld y(eig(i).real(), eig(i).imag());
        // Newton polish in extended precision.
        for (int it = 0; it < 50; ++it) {
            cld p = 0.0L, dp = 0.0L;
            for (int k = degree; k >= 0; --k) {
                dp = dp * y + p;
                p = p * y + coeff[static_cast<std::size_t>(k)];
            }
            if (std::abs(dp) == 0.0L) break;
            const cld step = p / dp;
            y -= step;
            if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(y))) break;
        }
        roots.push_back(y);
    }
    return roots;
}

// a[(2k + m) mod n] correlated with the two filters; n is even.
void analysis_step(std::span<const double> a, const WaveletFilter& f, std::span<double> approx,
                   std::span<double> detail) {
    const std::size_t n = a.size();
    const std::size_t len = f.length();
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        double lo = 0.0, hi = 0.0;
        const std::size_t base = 2 * k;
        if (base + len <= n) {
            for (std::size_t m = 0; m < len; ++m) {
                lo += f.lowpass[m] * a[base + m];
                hi += f.highpass[m] * a[base + m];
            }
        } else {
            for (std::size_t m = 0; m < len; ++m) {
                const double v = a[(base + m) % n];
                lo += f.lowpass[m] * v;
                hi += f.highpass[m] * v;
            }
        }
        approx[k] = lo;
        detail[k] = hi;
    }
}

// Validity of the next approximation level: no periodic wrap in its support.
std::vector<std::uint8_t> next_validity(const std::vector<std::uint8_t>& prev, std::size_t used,
                                        std::size_t filter_length) {
    std::vector<std::uint8_t> out(used / 2, 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        bool ok = 2 * k + filter_length <= used;
        for (std::size_t m = 0; ok && m < filter_length; ++m) ok = prev[2 * k + m] != 0;
        out[k] = ok ? 1 : 0;
    }
    return out;
}

// Rotate raw FWT outputs onto cube indices.
std::vector<double> place(const std::vector<double>& raw, std::size_t rows, std::size_t cols,
                          int shift_r, int shift_c, double scale) {
    std::vector<double> out(raw.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t rr = (r + static_cast<std::size_t>(shift_r)) % rows;
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t cc = (c + static_cast<std::size_t>(shift_c)) % cols;
            out[rr * cols + cc] = raw[r * cols + c] * scale;
        }
    }
    return out;
}

std::vector<std::uint8_t> placed_axis_validity(const std::vector<std::uint8_t>& raw, int shift,
                                               Boundary boundary) {
    const std::size_t n = raw.size();
    std::vector<std::uint8_t> out(n, boundary == Boundary::periodic ? 1 : 0);
    if (boundary == Boundary::periodic) return out;
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t k = m + static_cast<std::size_t>(shift);
        if (k < n && raw[m]) out[k] = 1;
    }
    return out;
}

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "discard"; }

Boundary parse_boundary(const std::string& name) {
    if (name == "periodic") return Boundary::periodic;
    if (name == "discard") return Boundary::discard;
    fail(ErrorKind::invalid_argument, "unknown boundary mode '" + name + "'");
}

WaveletFilter design_daubechies_filter(int order) {
    require(order >= 1 && order <= 20, ErrorKind::invalid_argument,
            "Daubechies order must lie in [1, 20], got " + std::to_string(order));

    // H(x) with x = z^{-1}: (1 + x)^N * prod (1 - z_i x) over the roots z_i of
    // the factorized polynomial lying inside the unit disk.
    std::vector<cld> poly{1.0L};
    auto multiply = [&poly](cld a0, cld a1) {
        std::vector<cld> next(poly.size() + 1, 0.0L);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i] * a0;
            next[i + 1] += poly[i] * a1;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < order; ++i) multiply(1.0L, 1.0L);
    if (order > 1) {
        for (const cld& y : daubechies_polynomial_roots(order)) {
            // y = (2 - z - 1/z) / 4  <=>  z^2 - (2 - 4y) z + 1 = 0
            const cld b = 1.0L - 2.0L * y;
            const cld disc = std::sqrt(b * b - 1.0L);
            cld z = b + disc;
            if (std::abs(z) > 1.0L) z = b - disc;
            multiply(1.0L, -z);
        }
    }

    WaveletFilter f;
    f.order = order;
    const std::size_t len = poly.size();
    std::vector<long double> taps(len);
    long double total = 0.0L;
    for (std::size_t i = 0; i < len; ++i) {
        taps[i] = poly[i].real();
        total += taps[i];
    }
    const long double norm = std::sqrt(2.0L) / total;
    f.lowpass.resize(len);
    f.highpass.resize(len);
    for (std::size_t i = 0; i < len; ++i) f.lowpass[i] = static_cast<double>(taps[i] * norm);
    for (std::size_t k = 0; k < len; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        f.highpass[k] = sign * f.lowpass[len - 1 - k];
    }
    return f;
}

std::size_t PyramidLevel::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

CoefficientPyramid::CoefficientPyramid(int dim, Boundary boundary, int filter_order,
                                       std::vector<PyramidLevel> levels,
                                       std::vector<double> coarse, std::size_t coarse_rows,
                                       std::size_t coarse_cols, double integration_order)
    : dim_(dim),
      boundary_(boundary),
      filter_order_(filter_order),
      levels_(std::move(levels)),
      coarse_(std::move(coarse)),
      coarse_rows_(coarse_rows),
      coarse_cols_(coarse_cols),
      integration_order_(integration_order) {
    require(dim_ == 1 || dim_ == 2, ErrorKind::invalid_argument, "dimension must be 1 or 2");
    const std::size_t nbands = dim_ == 1 ? 1 : 3;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const PyramidLevel& lv = levels_[i];
        require(lv.j == static_cast<int>(i) + 1, ErrorKind::invalid_argument,
                "pyramid levels must be numbered 1..J consecutively");
        require(lv.bands.size() == nbands, ErrorKind::invalid_argument,
                "wrong number of orientation bands at level " + std::to_string(lv.j));
        require(dim_ == 2 || lv.rows == 1, ErrorKind::invalid_argument,
                "1D levels must have a single row");
        for (const auto& band : lv.bands)
            require(band.size() == lv.size(), ErrorKind::invalid_argument,
                    "band size mismatch at level " + std::to_string(lv.j));
        require(lv.valid.size() == lv.size(), ErrorKind::invalid_argument,
                "mask size mismatch at level " + std::to_string(lv.j));
    }
}

const PyramidLevel& CoefficientPyramid::level(int j) const {
    require(j >= 1 && j <= num_levels(), ErrorKind::invalid_argument,
            "level " + std::to_string(j) + " outside 1.." + std::to_string(num_levels()));
    return levels_[static_cast<std::size_t>(j - 1)];
}

int max_admissible_level(const Signal& signal) {
    const std::size_t n = signal.min_axis();
    if (n < 2) return -2;
    int lg = 0;
    while ((std::size_t{1} << (lg + 1)) <= n) ++lg;
    return lg - 2;
}

int cube_shift(std::size_t filter_length, int j) {
    const double centre = 0.5 * static_cast<double>(filter_length - 1) * (1.0 - std::ldexp(1.0, -j));
    return static_cast<int>(std::lround(centre - 0.5));
}

CoefficientPyramid dwt_forward(const Signal& signal, const WaveletFilter& filter, int max_level,
                               Boundary boundary) {
    signal.require_finite();
    require(filter.length() >= 2 && filter.highpass.size() == filter.length(),
            ErrorKind::invalid_argument, "malformed wavelet filter");
    const int deepest = max_admissible_level(signal);
    require(max_level >= 1 && max_level <= deepest, ErrorKind::invalid_argument,
            "max_level " + std::to_string(max_level) + " outside admissible range 1.." +
                std::to_string(deepest));

    const std::size_t len = filter.length();
    std::vector<PyramidLevel> levels;
    levels.reserve(static_cast<std::size_t>(max_level));

    if (signal.dim() == 1) {
        std::vector<double> a(signal.samples().begin(), signal.samples().end());
        std::vector<std::uint8_t> va(a.size(), 1);
        for (int j = 1; j <= max_level; ++j) {
            const std::size_t used = a.size() - a.size() % 2;
            std::vector<double> approx(used / 2), detail(used / 2);
            analysis_step(std::span<const double>(a.data(), used), filter, approx, detail);
            auto vnext = next_validity(va, used, len);

            const int shift = cube_shift(len, j);
            PyramidLevel lv;
            lv.j = j;
            lv.rows = 1;
            lv.cols = detail.size();
            lv.bands.push_back(place(detail, 1, lv.cols, 0, shift, std::pow(2.0, -0.5 * j)));
            lv.valid = placed_axis_validity(vnext, shift, boundary);
            levels.push_back(std::move(lv));

            a = std::move(approx);
            va = std::move(vnext);
        }
        const std::size_t coarse_cols = a.size();
        return CoefficientPyramid(1, boundary, filter.order, std::move(levels), std::move(a), 1,
                                  coarse_cols);
    }

    // Separable 2D transform: rows first, then columns.
    std::size_t rows = signal.rows(), cols = signal.cols();
    std::vector<double> a(signal.samples().begin(), signal.samples().end());
    std::vector<std::uint8_t> vr(rows, 1), vc(cols, 1);
    for (int j = 1; j <= max_level; ++j) {
        const std::size_t ur = rows - rows % 2, uc = cols - cols % 2;
        const std::size_t hr = ur / 2, hc = uc / 2;
        std::vector<double> lo(ur * hc), hi(ur * hc);
        std::vector<double> row(uc), rl(hc), rh(hc);
        for (std::size_t r = 0; r < ur; ++r) {
            for (std::size_t c = 0; c < uc; ++c) row[c] = a[r * cols + c];
            analysis_step(row, filter, rl, rh);
            for (std::size_t c = 0; c < hc; ++c) {
                lo[r * hc + c] = rl[c];
                hi[r * hc + c] = rh[c];
            }
        }
        std::vector<double> ll(hr * hc), lh(hr * hc), hl(hr * hc), hh(hr * hc);
        std::vector<double> col(ur), cl(hr), ch(hr);
        auto columns = [&](const std::vector<double>& src, std::vector<double>& outl,
                           std::vector<double>& outh) {
            for (std::size_t c = 0; c < hc; ++c) {
                for (std::size_t r = 0; r < ur; ++r) col[r] = src[r * hc + c];
                analysis_step(col, filter, cl, ch);
                for (std::size_t r = 0; r < hr; ++r) {
                    outl[r * hc + c] = cl[r];
                    outh[r * hc + c] = ch[r];
                }
            }
        };
        columns(lo, ll, lh);
        columns(hi, hl, hh);
        auto vr_next = next_validity(vr, ur, len);
        auto vc_next = next_validity(vc, uc, len);

        const int shift = cube_shift(len, j);
        const double scale = std::ldexp(1.0, -j);  // 2^{-j}: L2 -> L1 in 2D
        PyramidLevel lv;
        lv.j = j;
        lv.rows = hr;
        lv.cols = hc;
        lv.bands.push_back(place(lh, hr, hc, shift, shift, scale));
        lv.bands.push_back(place(hl, hr, hc, shift, shift, scale));
        lv.bands.push_back(place(hh, hr, hc, shift, shift, scale));
        const auto pr = placed_axis_validity(vr_next, shift, boundary);
        const auto pc = placed_axis_validity(vc_next, shift, boundary);
        lv.valid.assign(hr * hc, 0);
        for (std::size_t r = 0; r < hr; ++r)
            for (std::size_t c = 0; c < hc; ++c) lv.valid[r * hc + c] = pr[r] && pc[c];
        levels.push_back(std::move(lv));

        a = std::move(ll);
        rows = hr;
        cols = hc;
        vr = std::move(vr_next);
        vc = std::move(vc_next);
    }
    return CoefficientPyramid(2, boundary, filter.order, std::move(levels), std::move(a), rows, cols);
}

std::vector<double> dwt_inverse_periodic(const CoefficientPyramid& pyramid,
                                         const WaveletFilter& filter) {
    require(pyramid.dim() == 1, ErrorKind::invalid_argument, "inverse transform is 1D only");
    require(pyramid.boundary() == Boundary::periodic, ErrorKind::invalid_argument,
            "inverse transform needs a periodic pyramid");
    require(pyramid.filter_order() == filter.order, ErrorKind::invalid_argument,
            "filter does not match the pyramid");
    require(pyramid.integration_order() == 0.0, ErrorKind::invalid_argument,
            "cannot invert a fractionally integrated pyramid");
    const std::size_t len = filter.length();
    std::vector<double> a = pyramid.coarse();
    for (int j = pyramid.num_levels(); j >= 1; --j) {
        const PyramidLevel& lv = pyramid.level(j);
        require(lv.cols == a.size(), ErrorKind::invalid_argument,
                "inverse transform needs dyadic level sizes");
        const std::size_t half = lv.cols;
        const std::size_t n = 2 * half;
        const int shift = cube_shift(len, j);
        const double unscale = std::sqrt(std::ldexp(1.0, j));
        std::vector<double> out(n, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            const double d = lv.bands[0][(k + static_cast<std::size_t>(shift)) % half] * unscale;
            for (std::size_t m = 0; m < len; ++m) {
                out[(2 * k + m) % n] += filter.lowpass[m] * a[k] + filter.highpass[m] * d;
            }
        }
        a = std::move(out);
    }
    return a;
}

}  // namespace mfa
