#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfa {

// Uniformly sampled data: a 1D series or a row-major 2D image.
class Signal {
public:
    Signal() = default;

    static Signal line(std::vector<double> samples, double spacing = 1.0);
    static Signal image(std::size_t rows, std::size_t cols, std::vector<double> samples,
                        double spacing = 1.0);

    int dim() const { return dim_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double spacing() const { return spacing_; }

    // Length of the shortest axis.
    std::size_t min_axis() const;

    std::span<const double> samples() const { return samples_; }
    double operator[](std::size_t i) const { return samples_[i]; }
    double at(std::size_t r, std::size_t c) const { return samples_[r * cols_ + c]; }

    // Throws invalid_data when any sample is NaN or infinite.
    void require_finite() const;

    // Contiguous 1D sub-range [offset, offset + length).
    Signal window(std::size_t offset, std::size_t length) const;

private:
    std::vector<double> samples_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int dim_ = 1;
    double spacing_ = 1.0;
};

}  // namespace mfa
