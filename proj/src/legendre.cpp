#include <algorithm>
#include <cmath>
#include <numeric>

#include "mfa/error.hpp"
#include "mfa/scaling.hpp"

namespace mfa {

LegendreSpectrum legendre_transform(int dim, std::span<const double> p_grid,
                                    std::span<const double> zeta, std::span<const double> h_grid) {
    require(p_grid.size() == zeta.size(), ErrorKind::invalid_argument,
            "p grid and scaling function differ in length");
    require(!h_grid.empty(), ErrorKind::invalid_argument, "empty h grid");

    // Candidates ordered by |p| so that strict improvement breaks ties toward small |p|.
    std::vector<std::pair<double, double>> cand{{0.0, 0.0}};
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        require(std::isfinite(zeta[i]), ErrorKind::invalid_argument, "non-finite scaling value");
        if (p_grid[i] != 0.0) cand.emplace_back(p_grid[i], zeta[i]);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });

    LegendreSpectrum out;
    out.dim = dim;
    if (std::none_of(p_grid.begin(), p_grid.end(), [](double p) { return p < 0.0; }))
        out.warnings.push_back("p grid has no negative values; the decreasing branch is unavailable");
    const double d = dim;
    for (double h : h_grid) {
        double best = d, arg = 0.0;
        for (const auto& [p, z] : cand) {
            const double v = d + h * p - z;
            if (v < best) {
                best = v;
                arg = p;
            }
        }
        out.h.push_back(h);
        out.L.push_back(best);
        out.argmin_p.push_back(arg);
        out.negative.push_back(best < 0.0 ? 1 : 0);
        if (best >= 0.0) {
            out.h_lo = out.h_lo ? std::min(*out.h_lo, h) : h;
            out.h_hi = out.h_hi ? std::max(*out.h_hi, h) : h;
        }
    }
    const auto neg = std::count(out.negative.begin(), out.negative.end(), std::uint8_t{1});
    if (neg > 0)
        out.warnings.push_back(std::to_string(neg) + " h values have L(h) < 0 (empty set)");
    return out;
}

LegendreSpectrum legendre_spectrum(const ScalingEstimate& zeta, std::span<const double> h_grid) {
    return legendre_transform(zeta.dim, zeta.p_grid, zeta.values, h_grid);
}

std::vector<double> default_h_grid(const ScalingEstimate& zeta, std::size_t points) {
    require(points >= 2, ErrorKind::invalid_argument, "h grid needs two points");
    std::vector<std::size_t> idx(zeta.p_grid.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return zeta.p_grid[a] < zeta.p_grid[b]; });
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const double dp = zeta.p_grid[idx[k]] - zeta.p_grid[idx[k - 1]];
        if (dp <= 0.0) continue;
        const double s = (zeta.values[idx[k]] - zeta.values[idx[k - 1]]) / dp;
        lo = first ? s : std::min(lo, s);
        hi = first ? s : std::max(hi, s);
        first = false;
    }
    require(!first, ErrorKind::invalid_argument, "p grid needs two distinct values");
    const double pad = std::max(0.05, 0.1 * (hi - lo));
    lo -= pad;
    hi += pad;
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict compare(const Quantity& q, double threshold) {
    const double lo = q.ci ? q.ci->lo : q.value;
    const double hi = q.ci ? q.ci->hi : q.value;
    if (lo > threshold) return Verdict::yes;
    if (hi < threshold) return Verdict::no;
    return Verdict::inconclusive;
}

MembershipReport membership_tests(const ScalingEstimate& eta, const ScalingEstimate& zeta) {
    const auto eta1 = eta.quantity_at(1.0);
    const auto eta2 = eta.quantity_at(2.0);
    const auto zeta2 = zeta.quantity_at(2.0);
    const std::optional<Quantity> hmin = eta.h_min ? eta.h_min : zeta.h_min;
    std::string missing;
    if (!eta1) missing += " eta(1)";
    if (!eta2) missing += " eta(2)";
    if (!zeta2) missing += " zeta(2)";
    if (!hmin) missing += " h_min";
    if (!missing.empty()) fail(ErrorKind::incomplete_report, "membership tests lack" + missing);

    MembershipReport r;
    r.in_BV = compare(*eta1, 1.0);
    r.in_L2 = compare(*eta2, 0.0);
    r.locally_bounded = compare(*hmin, 0.0);
    if (r.locally_bounded == Verdict::yes) {
        r.bounded_quadratic_variation = compare(*zeta2, static_cast<double>(zeta.dim));
    } else {
        r.bounded_quadratic_variation = Verdict::inconclusive;
        r.notes.push_back("quadratic variation test skipped: h_min is not positive");
    }
    if (r.in_BV == Verdict::no)
        r.notes.push_back("eta(1) < 1 only rules out the sufficient condition for BV");
    return r;
}

SubordinationResult infer_subordination_H(const ScalingEstimate& eta) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < eta.p_grid.size(); ++i)
        if (eta.p_grid[i] > 0.0) pts.emplace_back(eta.p_grid[i], eta.values[i]);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const auto [pa, ea] = pts[k];
        const auto [pb, eb] = pts[k + 1];
        const double fa = ea - 1.0, fb = eb - 1.0;
        if (fa == 0.0) return {1.0 / pa, pa, 1.0 / pa, 1.0 / pa};
        if (fa * fb > 0.0) continue;
        auto f = [&](double p) { return ea + (eb - ea) * (p - pa) / (pb - pa) - 1.0; };
        double lo = pa, hi = pb;
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            if ((f(mid) > 0.0) == (fa > 0.0))
                lo = mid;
            else
                hi = mid;
        }
        const double p = 0.5 * (lo + hi);
        return {1.0 / p, p, 1.0 / pb, 1.0 / pa};
    }
    fail(ErrorKind::no_root, "eta(p) - 1 does not change sign on the positive p grid");
}

}  // namespace mfa
