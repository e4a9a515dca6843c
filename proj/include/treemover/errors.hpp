// Error categories shared across the library. The CLI maps these to exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace treemover {

// Malformed input data (bad JSON, invariant violations). CLI exit code 3.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller broke an operation's precondition (dimension mismatch, bad range). CLI exit code 3.
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// A configurable budget was exceeded (e.g. k-tuple node budget). CLI exit code 4.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures: missing file, unwritable path. CLI exit code 1.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace treemover
