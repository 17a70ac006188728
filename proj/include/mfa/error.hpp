#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfa {

enum class ErrorKind {
    invalid_argument,
    invalid_data,
    insufficient_scales,
    insufficient_data,
    degenerate_input,
    degenerate_leader,
    no_root,
    incomplete_report,
    io,
    internal,
};

std::string_view to_string(ErrorKind kind);

// Every library failure is reported through this type; the kind drives the
// CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) throw Error(kind, message);
}

}  // namespace mfa
