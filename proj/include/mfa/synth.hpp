#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfa/rng.hpp"
#include "mfa/signal.hpp"

namespace mfa {

// Closed-form reference for a generator. zeta is the leader scaling function
// of the generated signal (octave convention, exponents positive for smooth
// data); spectrum is its multifractal spectrum, -infinity off the support.
struct GroundTruth {
    int dim = 1;
    std::function<double(double)> zeta;
    std::function<double(double)> spectrum;
    std::optional<double> hmin;
    std::string description;
};

struct Synthesized {
    Signal signal;
    GroundTruth truth;
};

// Fractional Brownian motion sampled at k/n, k = 0..n-1 (n x n grid in 2D).
// 1D uses exact circulant embedding of fractional Gaussian noise; 2D uses the
// intrinsic embedding of the isotropic increment field and needs H <= 0.75.
Signal synth_fbm(double H, std::size_t n, int dim, std::uint64_t seed, std::uint64_t stream = 0);
GroundTruth fbm_truth(double H, int dim = 1);

enum class WeierstrassVariant { sin, cos_renorm };

// sum_n f(a^n x) a^{-H n} at x = k/n over [0, 1), with f = sin, or cos - 1 for
// the renormalized variant (H up to 2). Terms are kept while their bound on
// [0, 1) exceeds 1e-14 on either side.
Signal synth_weierstrass(double a, double H, std::size_t n,
                         WeierstrassVariant variant = WeierstrassVariant::sin);
// Number of terms on each side of n = 0 retained by synth_weierstrass.
std::pair<int, int> weierstrass_term_range(double a, double H, WeierstrassVariant variant);

struct MultiplierLaw {
    enum class Kind { lognormal, logpoisson, deterministic } kind = Kind::deterministic;
    double m = 0.0;       // lognormal: ln w ~ N(m, sigma2)
    double sigma2 = 0.0;
    double lambda = 0.0;  // logpoisson: w = beta^pi e^gamma, pi ~ Poisson(lambda)
    double beta = 1.0;
    double gamma = 0.0;
    std::vector<double> fractions;  // deterministic: mass fraction per child, summing to 1

    static MultiplierLaw lognormal(double sigma2);  // mean one: m = -sigma2 / 2
    static MultiplierLaw logpoisson(double lambda, double beta);
    static MultiplierLaw she_leveque();
    static MultiplierLaw deterministic(std::vector<double> fractions);

    // log_c E[W^q] with W the mean-one multiplier; c is the branching number.
    double log_moment(double q, int branching) const;
};

// One mean-one multiplier for child `child` of a c-adic split.
double draw_multiplier(const MultiplierLaw& law, int branching, int child, Philox& rng);

struct CascadeSpec {
    int branching = 2;
    int depth = 12;
    MultiplierLaw law;
};

// Cell masses of the depth-J product measure on [0, 1) (c^J cells). The
// ground truth describes the masses read as a density: zeta(q) = -log_c E W^q.
Synthesized synth_cascade(const CascadeSpec& spec, std::uint64_t seed, std::uint64_t stream = 0);

struct LognormalCalibration {
    double sigma2 = 0.0;      // variance of ln w
    double integration = 0.0; // wavelet-domain integration order applied before analysis
};

// Lognormal cascade whose density, integrated to order `integration`, has
// log-cumulants (c1, c2) in base 2 with c2 < 0.
LognormalCalibration calibrate_lognormal(double c1, double c2);

// fBm of index H read through the normalized distribution function F of a
// cascade: X_k = B_H at the point of a 16n grid nearest F(k/n).
Synthesized synth_fbm_mf_time(double H, const CascadeSpec& cascade, std::size_t n,
                              std::uint64_t seed, std::uint64_t stream = 0);

// Cumulative sum of n-1 i.i.d. symmetric alpha-stable increments (unit scale,
// Chambers-Mallows-Stuck), starting at 0. alpha = 2 gives Gaussian steps of variance 2.
Synthesized synth_levy_stable(double alpha, std::size_t n, std::uint64_t seed,
                              std::uint64_t stream = 0);
double symmetric_stable(double alpha, Philox& rng);

Signal transform_square(const Signal& signal);
// Bi-Holder truth for the square of fBm(H): D = 1 at H, D = 1 - H at 2H.
GroundTruth squared_fbm_truth(double H);

// Legendre transform of a scaling function on a dense p grid.
std::function<double(double)> numeric_spectrum(std::function<double(double)> zeta, int dim,
                                               double p_max = 30.0, double dp = 0.005);

}  // namespace mfa
