#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lpw {

// Error classes double as process exit codes so CI scripts can gate on them:
// 2 schema/validation, 3 insufficient data, 4 degenerate statistics, 5 I/O.
enum class ErrorClass {
    Schema = 2,
    Insufficient = 3,
    Degenerate = 4,
    Io = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string module, const std::string& message)
        : std::runtime_error("[" + module + "] " + message),
          cls_(cls),
          module_(std::move(module)) {}

    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }
    const std::string& module_name() const noexcept { return module_; }

private:
    ErrorClass cls_;
    std::string module_;
};

// Malformed input: bad header, out-of-range value, duplicate key, invalid
// enumeration, or an argument outside its documented domain.
struct SchemaError : Error {
    SchemaError(std::string module, const std::string& message)
        : Error(ErrorClass::Schema, std::move(module), message) {}
};

// Too little data to compute the requested statistic at all.
struct InsufficientDataError : Error {
    InsufficientDataError(std::string module, const std::string& message)
        : Error(ErrorClass::Insufficient, std::move(module), message) {}
};

// The statistic exists but its value is not identifiable (e.g. zero-variance
// differences in a paired test).
struct DegenerateError : Error {
    DegenerateError(std::string module, const std::string& message)
        : Error(ErrorClass::Degenerate, std::move(module), message) {}
};

struct IoError : Error {
    IoError(std::string module, const std::string& message)
        : Error(ErrorClass::Io, std::move(module), message) {}
};

// Bad command-line usage (unknown format, no sections selected). Shares the
// validation exit code.
struct UsageError : Error {
    UsageError(std::string module, const std::string& message)
        : Error(ErrorClass::Schema, std::move(module), message) {}
};

}  // namespace lpw
