#pragma once

#include <stdexcept>
#include <string>

namespace prindt {

enum class ErrorCode {
    io,
    parse,
    invalid_argument,
    schema_mismatch,
    degenerate,
    empty_ensemble,
    internal,
};

/// All recoverable failures in the library are thrown as Error. The code
/// survives across the C API boundary as a status value.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace prindt
