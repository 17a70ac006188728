#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "mfa/dwt.hpp"
#include "mfa/geometry.hpp"
#include "mfa/leaders.hpp"
#include "mfa/signal.hpp"

namespace mfa {

enum class Format { csv, f64, f32, pgm, pbm };

std::string to_string(Format f);
Format parse_format(const std::string& name);
// From the file extension; "-" and unknown extensions read as CSV.
Format infer_format(const std::string& path);

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// "RxC", e.g. "512x512".
Shape parse_shape(const std::string& text);

// CSV: one value per line (blank lines and '#' comments skipped); a line with
// several comma-separated values makes the file a 2D image, one row per line.
// Raw f64/f32: little-endian, 1D unless a shape is given. PGM: binary P5,
// 8 or 16 bit. PBM: binary P4, set bits read as 1.
Signal read_signal(std::istream& in, Format format, std::optional<Shape> shape = std::nullopt);
// "-" reads standard input.
Signal read_signal(const std::string& path, std::optional<Format> format = std::nullopt,
                   std::optional<Shape> shape = std::nullopt);

// CSV writes one value per line in 1D and one row per line in 2D. PGM maps
// the sample range linearly onto 16-bit grey levels.
void write_signal(std::ostream& out, const Signal& signal, Format format);
void write_signal(const std::string& path, const Signal& signal, std::optional<Format> format = std::nullopt);

// Occupancy grid from P4 (set bits), P5 (non-zero grey) or CSV/raw data
// (non-zero samples). The image must be square with a power-of-two side.
BinaryGrid read_grid(const std::string& path, std::optional<Format> format = std::nullopt,
                     std::optional<Shape> shape = std::nullopt);
BinaryGrid grid_from_signal(const Signal& signal);
void write_grid(const std::string& path, const BinaryGrid& grid, Format format = Format::pbm);

// Directory holding manifest.json plus one little-endian f64 file per octave
// and band (and per octave for leaders, with a uint8 validity mask).
void export_pyramid(const std::string& directory, const CoefficientPyramid& pyramid,
                    const LeaderPyramid* leaders = nullptr);

}  // namespace mfa
