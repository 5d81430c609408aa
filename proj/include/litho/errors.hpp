#pragma once

#include <stdexcept>
#include <string>

namespace litho {

// Error taxonomy shared by the C++ core, the C API status codes and the CLI
// exit codes: validation-class problems map to exit 2, numerical-class to 3.
enum class ErrorCode {
    invalid_config,
    grid_mismatch,
    capacity_exceeded,
    geometry_overflow,
    degenerate_target,
    parse_error,
    dimension_mismatch,
    io_error,
    convergence_failure,
    non_finite_objective,
};

inline bool is_numerical(ErrorCode c) {
    return c == ErrorCode::convergence_failure || c == ErrorCode::non_finite_objective;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace litho
