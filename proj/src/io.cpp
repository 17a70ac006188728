#include "mfa/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mfa/error.hpp"

namespace mfa {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, std::size_t line) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        fail(ErrorKind::invalid_data, "line " + std::to_string(line) + ": not a number: '" + t + "'");
    return v;
}

Signal read_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t n = 0;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ',')) {
            values.push_back(parse_number(field, line_no));
            ++n;
        }
        if (rows == 0) cols = n;
        require(n == cols, ErrorKind::invalid_data,
                "line " + std::to_string(line_no) + " has " + std::to_string(n) + " values, expected " +
                    std::to_string(cols));
        ++rows;
    }
    require(!values.empty(), ErrorKind::invalid_data, "input holds no samples");
    if (cols == 1) return Signal::line(std::move(values));
    return Signal::image(rows, cols, std::move(values));
}

template <typename T>
Signal read_raw(std::istream& in, std::optional<Shape> shape) {
    static_assert(std::endian::native == std::endian::little, "raw input assumes a little-endian host");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!bytes.empty(), ErrorKind::invalid_data, "input holds no samples");
    require(bytes.size() % sizeof(T) == 0, ErrorKind::invalid_data,
            "raw input length is not a multiple of " + std::to_string(sizeof(T)) + " bytes");
    std::vector<double> v(bytes.size() / sizeof(T));
    for (std::size_t i = 0; i < v.size(); ++i) {
        T x;
        std::memcpy(&x, bytes.data() + i * sizeof(T), sizeof(T));
        v[i] = static_cast<double>(x);
    }
    if (!shape) return Signal::line(std::move(v));
    require(shape->rows * shape->cols == v.size(), ErrorKind::invalid_data,
            "raw input has " + std::to_string(v.size()) + " samples, shape asks for " +
                std::to_string(shape->rows * shape->cols));
    if (shape->rows == 1) return Signal::line(std::move(v));
    return Signal::image(shape->rows, shape->cols, std::move(v));
}

// Next header token of a netpbm file, skipping comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    require(!tok.empty(), ErrorKind::invalid_data, "truncated netpbm header");
    return tok;
}

std::size_t pnm_size(std::istream& in, const char* what) {
    const std::string t = pnm_token(in);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    require(ec == std::errc() && ptr == t.data() + t.size() && v > 0, ErrorKind::invalid_data,
            std::string("bad netpbm ") + what + " '" + t + "'");
    return v;
}

Signal read_pnm(std::istream& in, Format format) {
    const std::string magic = pnm_token(in);
    const std::size_t cols = pnm_size(in, "width");
    const std::size_t rows = pnm_size(in, "height");
    std::vector<double> v(rows * cols);
    if (format == Format::pgm) {
        require(magic == "P5", ErrorKind::invalid_data, "expected a binary PGM (P5), got " + magic);
        const std::size_t maxval = pnm_size(in, "maxval");
        require(maxval < 65536, ErrorKind::invalid_data, "PGM maxval above 65535");
        const std::size_t bpp = maxval < 256 ? 1 : 2;
        std::vector<unsigned char> buf(rows * cols * bpp);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        require(static_cast<std::size_t>(in.gcount()) == buf.size(), ErrorKind::invalid_data, "truncated PGM data");
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = bpp == 1 ? buf[i] : static_cast<double>((buf[2 * i] << 8) | buf[2 * i + 1]);
    } else {
        require(magic == "P4", ErrorKind::invalid_data, "expected a binary PBM (P4), got " + magic);
        const std::size_t stride = (cols + 7) / 8;
        std::vector<unsigned char> buf(rows * stride);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        require(static_cast<std::size_t>(in.gcount()) == buf.size(), ErrorKind::invalid_data, "truncated PBM data");
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                v[r * cols + c] = (buf[r * stride + c / 8] >> (7 - c % 8)) & 1;
    }
    if (rows == 1) return Signal::line(std::move(v));
    return Signal::image(rows, cols, std::move(v));
}

template <typename T>
void write_raw(std::ostream& out, const Signal& s) {
    for (double x : s.samples()) {
        const T v = static_cast<T>(x);
        out.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
}

void write_pgm(std::ostream& out, const Signal& s) {
    const auto [lo, hi] = std::minmax_element(s.samples().begin(), s.samples().end());
    const double range = *hi - *lo;
    out << "P5\n" << s.cols() << ' ' << (s.dim() == 1 ? 1 : s.rows()) << "\n65535\n";
    for (double x : s.samples()) {
        const auto g = static_cast<std::uint16_t>(range > 0 ? std::lround((x - *lo) / range * 65535.0) : 0);
        const unsigned char b[2] = {static_cast<unsigned char>(g >> 8), static_cast<unsigned char>(g & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 2);
    }
}

void write_csv(std::ostream& out, const Signal& s) {
    char buf[32];
    const std::size_t cols = s.dim() == 1 ? 1 : s.cols();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto r = std::to_chars(buf, buf + sizeof buf, s[i]);
        out.write(buf, r.ptr - buf);
        out.put((i + 1) % cols == 0 ? '\n' : ',');
    }
}

void write_f64_file(const std::filesystem::path& path, const std::vector<double>& v) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void write_u8_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& v) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
}

}  // namespace

std::string to_string(Format f) {
    switch (f) {
        case Format::csv: return "csv";
        case Format::f64: return "f64";
        case Format::f32: return "f32";
        case Format::pgm: return "pgm";
        case Format::pbm: return "pbm";
    }
    return "?";
}

Format parse_format(const std::string& name) {
    const std::string n = lower(name);
    if (n == "csv" || n == "txt") return Format::csv;
    if (n == "f64" || n == "bin" || n == "raw") return Format::f64;
    if (n == "f32") return Format::f32;
    if (n == "pgm") return Format::pgm;
    if (n == "pbm") return Format::pbm;
    fail(ErrorKind::invalid_argument, "unknown format '" + name + "'");
}

Format infer_format(const std::string& path) {
    if (path == "-") return Format::csv;
    const std::string ext = lower(std::filesystem::path(path).extension().string());
    if (ext.size() > 1) {
        try {
            return parse_format(ext.substr(1));
        } catch (const Error&) {
        }
    }
    return Format::csv;
}

Shape parse_shape(const std::string& text) {
    const auto x = text.find_first_of("xX");
    require(x != std::string::npos, ErrorKind::invalid_argument, "shape must look like ROWSxCOLS");
    Shape s;
    const std::string a = text.substr(0, x), b = text.substr(x + 1);
    const auto r1 = std::from_chars(a.data(), a.data() + a.size(), s.rows);
    const auto r2 = std::from_chars(b.data(), b.data() + b.size(), s.cols);
    require(r1.ec == std::errc() && r2.ec == std::errc() && r1.ptr == a.data() + a.size() &&
                r2.ptr == b.data() + b.size() && s.rows > 0 && s.cols > 0,
            ErrorKind::invalid_argument, "shape must look like ROWSxCOLS, got '" + text + "'");
    return s;
}

Signal read_signal(std::istream& in, Format format, std::optional<Shape> shape) {
    Signal s;
    switch (format) {
        case Format::csv: s = read_csv(in); break;
        case Format::f64: s = read_raw<double>(in, shape); break;
        case Format::f32: s = read_raw<float>(in, shape); break;
        case Format::pgm:
        case Format::pbm: s = read_pnm(in, format); break;
    }
    s.require_finite();
    return s;
}

Signal read_signal(const std::string& path, std::optional<Format> format, std::optional<Shape> shape) {
    const Format f = format.value_or(infer_format(path));
    if (path == "-") return read_signal(std::cin, f, shape);
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
    return read_signal(in, f, shape);
}

void write_signal(std::ostream& out, const Signal& signal, Format format) {
    switch (format) {
        case Format::csv: write_csv(out, signal); break;
        case Format::f64: write_raw<double>(out, signal); break;
        case Format::f32: write_raw<float>(out, signal); break;
        case Format::pgm: write_pgm(out, signal); break;
        case Format::pbm: fail(ErrorKind::invalid_argument, "PBM output is for binary grids");
    }
    require(static_cast<bool>(out), ErrorKind::io, "write failed");
}

void write_signal(const std::string& path, const Signal& signal, std::optional<Format> format) {
    const Format f = format.value_or(infer_format(path));
    if (path == "-") return write_signal(std::cout, signal, f);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
    write_signal(out, signal, f);
}

BinaryGrid grid_from_signal(const Signal& signal) {
    require(signal.dim() == 2 && signal.rows() == signal.cols(), ErrorKind::invalid_data,
            "a binary grid must be a square image");
    const std::size_t side = signal.rows();
    require(std::has_single_bit(side) && side >= 2, ErrorKind::invalid_data,
            "grid side must be a power of two, got " + std::to_string(side));
    BinaryGrid g = BinaryGrid::empty(std::countr_zero(side));
    for (std::size_t i = 0; i < signal.size(); ++i) g.cells[i] = signal[i] != 0.0 ? 1 : 0;
    return g;
}

BinaryGrid read_grid(const std::string& path, std::optional<Format> format, std::optional<Shape> shape) {
    return grid_from_signal(read_signal(path, format, shape));
}

void write_grid(const std::string& path, const BinaryGrid& grid, Format format) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (path != "-") {
        file.open(path, std::ios::binary);
        require(static_cast<bool>(file), ErrorKind::io, "cannot write " + path);
        out = &file;
    }
    const std::size_t side = grid.side();
    if (format == Format::pbm) {
        *out << "P4\n" << side << ' ' << side << '\n';
        const std::size_t stride = (side + 7) / 8;
        std::vector<unsigned char> row(stride);
        for (std::size_t r = 0; r < side; ++r) {
            std::fill(row.begin(), row.end(), 0);
            for (std::size_t c = 0; c < side; ++c)
                if (grid.at(r, c)) row[c / 8] |= static_cast<unsigned char>(0x80 >> (c % 8));
            out->write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(stride));
        }
    } else if (format == Format::pgm) {
        *out << "P5\n" << side << ' ' << side << "\n255\n";
        for (std::uint8_t v : grid.cells) out->put(v ? static_cast<char>(255) : 0);
    } else {
        write_signal(*out, grid.to_signal(), format);
    }
    require(static_cast<bool>(*out), ErrorKind::io, "write failed");
}

void export_pyramid(const std::string& directory, const CoefficientPyramid& pyramid, const LeaderPyramid* leaders) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create " + directory + ": " + ec.message());
    nlohmann::json m;
    m["dim"] = pyramid.dim();
    m["boundary"] = to_string(pyramid.boundary());
    m["filter_order"] = pyramid.filter_order();
    m["integration_order"] = pyramid.integration_order();
    m["normalization"] = "L1";
    m["dtype"] = "float64-le";
    m["levels"] = nlohmann::json::array();
    for (const PyramidLevel& lv : pyramid.levels()) {
        nlohmann::json l;
        l["j"] = lv.j;
        l["rows"] = lv.rows;
        l["cols"] = lv.cols;
        l["bands"] = nlohmann::json::array();
        for (std::size_t b = 0; b < lv.bands.size(); ++b) {
            const std::string name = "coef_j" + std::to_string(lv.j) + "_b" + std::to_string(b) + ".f64";
            write_f64_file(dir / name, lv.bands[b]);
            l["bands"].push_back(name);
        }
        const std::string mask = "valid_j" + std::to_string(lv.j) + ".u8";
        write_u8_file(dir / mask, lv.valid);
        l["valid"] = mask;
        if (leaders) {
            const LeaderLevel& ll = leaders->level(lv.j);
            const std::string name = "leaders_j" + std::to_string(lv.j) + ".f64";
            const std::string lmask = "leaders_valid_j" + std::to_string(lv.j) + ".u8";
            write_f64_file(dir / name, ll.values);
            write_u8_file(dir / lmask, ll.valid);
            l["leaders"] = name;
            l["leaders_valid"] = lmask;
        }
        m["levels"].push_back(std::move(l));
    }
    if (!pyramid.coarse().empty()) {
        write_f64_file(dir / "coarse.f64", pyramid.coarse());
        m["coarse"] = {{"file", "coarse.f64"}, {"rows", pyramid.coarse_rows()}, {"cols", pyramid.coarse_cols()}};
    }
    std::ofstream f(dir / "manifest.json");
    require(static_cast<bool>(f), ErrorKind::io, "cannot write manifest in " + directory);
    f << m.dump(2) << '\n';
}

}  // namespace mfa
