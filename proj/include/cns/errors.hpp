#ifndef CNS_ERRORS_HPP
#define CNS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cns {

/// Iterative solver failed to meet its residual contract.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, double residual_, int iterations_)
        : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

/// NaN/Inf detected while stepping.
struct BlowupError : std::runtime_error {
    BlowupError(const std::string& what, long step_) : std::runtime_error(what), step(step_) {}
    long step;
};

/// Bad run configuration (maps to exit code 4).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cns

#endif
