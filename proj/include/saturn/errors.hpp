#pragma once

#include <stdexcept>
#include <string>

namespace saturn {

enum class ErrorKind {
    domain,         // point outside the kernel domain
    parameter,      // lambda <= 0, bad p, ...
    configuration,  // inconsistent experiment setup or config file
    numeric,        // eigensolver failure, non-finite values
    io,
    unsupported,    // no analytic eigen-system, unknown harmonic
    fit,            // rate fit with too few / nonpositive points
    empty_data,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// CLI exit code for an error kind: 2 config-like errors, 3 numeric, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

const char *to_string(ErrorKind kind) noexcept;

}  // namespace saturn
