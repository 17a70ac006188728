#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfa/signal.hpp"

namespace mfa {

enum class Boundary { periodic, discard };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& name);

struct WaveletFilter {
    int order = 0;  // number of vanishing moments
    std::vector<double> lowpass;
    std::vector<double> highpass;

    std::size_t length() const { return lowpass.size(); }
};

// Minimum-phase Daubechies filter with `order` vanishing moments (1..20),
// obtained by spectral factorization; order 1 is Haar.
WaveletFilter design_daubechies_filter(int order);

// One octave of coefficients. Scale index j counts octaves from the sampling
// grid: level 1 is the finest detail, the atoms of level j live on dyadic
// cubes of 2^j samples per axis. Entry (r, c) belongs to the cube with corner
// (r * 2^j, c * 2^j).
struct PyramidLevel {
    int j = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<double>> bands;  // row-major, 1 band in 1D, 3 in 2D
    std::vector<std::uint8_t> valid;         // 1 where the atom is usable

    std::size_t size() const { return rows * cols; }
    std::size_t valid_count() const;
    bool is_valid(std::size_t r, std::size_t c) const { return valid[r * cols + c] != 0; }
};

// Per-octave L1-normalized detail coefficients plus the retained coarse
// approximation. Immutable once built.
class CoefficientPyramid {
public:
    CoefficientPyramid(int dim, Boundary boundary, int filter_order,
                       std::vector<PyramidLevel> levels, std::vector<double> coarse = {},
                       std::size_t coarse_rows = 0, std::size_t coarse_cols = 0,
                       double integration_order = 0.0);

    int dim() const { return dim_; }
    Boundary boundary() const { return boundary_; }
    int filter_order() const { return filter_order_; }
    // Cumulative order of wavelet-domain fractional integration applied.
    double integration_order() const { return integration_order_; }

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const PyramidLevel& level(int j) const;
    std::span<const PyramidLevel> levels() const { return levels_; }

    const std::vector<double>& coarse() const { return coarse_; }
    std::size_t coarse_rows() const { return coarse_rows_; }
    std::size_t coarse_cols() const { return coarse_cols_; }

    std::vector<std::string> warnings;

private:
    int dim_;
    Boundary boundary_;
    int filter_order_;
    std::vector<PyramidLevel> levels_;
    std::vector<double> coarse_;
    std::size_t coarse_rows_;
    std::size_t coarse_cols_;
    double integration_order_;
};

// Deepest octave accepted by dwt_forward: floor(log2(min axis)) - 2.
int max_admissible_level(const Signal& signal);

// Index offset that maps the FWT output index m of octave j onto the dyadic
// cube whose centre is closest to the centre of the wavelet's support.
int cube_shift(std::size_t filter_length, int j);

// Fast wavelet transform down to octave max_level. Outputs of the orthonormal
// filter bank are multiplied by 2^{-dim*j/2} so that coefficients follow the
// L1 convention (self-similar inputs give |c| ~ 2^{j H}).
CoefficientPyramid dwt_forward(const Signal& signal, const WaveletFilter& filter, int max_level,
                               Boundary boundary = Boundary::discard);

// Inverse of a periodic 1D transform; used to check the round trip.
std::vector<double> dwt_inverse_periodic(const CoefficientPyramid& pyramid,
                                         const WaveletFilter& filter);

}  // namespace mfa
