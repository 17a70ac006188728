#include "mfa/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfa/error.hpp"

namespace mfa {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::invalid_data: return "invalid-data";
        case ErrorKind::insufficient_scales: return "insufficient-scales";
        case ErrorKind::insufficient_data: return "insufficient-data";
        case ErrorKind::degenerate_input: return "degenerate-input";
        case ErrorKind::degenerate_leader: return "degenerate-leader";
        case ErrorKind::no_root: return "no-root";
        case ErrorKind::incomplete_report: return "incomplete-report";
        case ErrorKind::io: return "io";
        case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

Signal Signal::line(std::vector<double> samples, double spacing) {
    require(spacing > 0.0, ErrorKind::invalid_argument, "sample spacing must be positive");
    Signal s;
    s.rows_ = 1;
    s.cols_ = samples.size();
    s.samples_ = std::move(samples);
    s.dim_ = 1;
    s.spacing_ = spacing;
    return s;
}

Signal Signal::image(std::size_t rows, std::size_t cols, std::vector<double> samples,
                     double spacing) {
    require(rows * cols == samples.size(), ErrorKind::invalid_argument,
            "image shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                " does not match " + std::to_string(samples.size()) + " samples");
    require(spacing > 0.0, ErrorKind::invalid_argument, "sample spacing must be positive");
    Signal s;
    s.rows_ = rows;
    s.cols_ = cols;
    s.samples_ = std::move(samples);
    s.dim_ = 2;
    s.spacing_ = spacing;
    return s;
}

std::size_t Signal::min_axis() const {
    return dim_ == 1 ? cols_ : std::min(rows_, cols_);
}

void Signal::require_finite() const {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]))
            fail(ErrorKind::invalid_data, "non-finite sample at index " + std::to_string(i));
    }
}

Signal Signal::window(std::size_t offset, std::size_t length) const {
    require(dim_ == 1, ErrorKind::invalid_argument, "windows are only defined for 1D signals");
    require(offset + length <= samples_.size(), ErrorKind::invalid_argument,
            "window exceeds signal length");
    std::vector<double> w(samples_.begin() + static_cast<std::ptrdiff_t>(offset),
                          samples_.begin() + static_cast<std::ptrdiff_t>(offset + length));
    return line(std::move(w), spacing_);
}

}  // namespace mfa
