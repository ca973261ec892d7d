#pragma once

#include <stdexcept>
#include <string>

namespace shortpath {

struct MalformedInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EnumerationCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedReduction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver gave up; carries the last residual norm.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

struct BoundNotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConditionsUnverified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JumpAssumptionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shortpath
