#pragma once

#include <stdexcept>
#include <string>

namespace couplab {

/// Bad or inconsistent configuration / inputs. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trajectory left the representable range. Carries the failure time. CLI exit code 3.
struct BlowUpError : std::runtime_error {
    double time;
    explicit BlowUpError(double t)
        : std::runtime_error("trajectory blow-up at t=" + std::to_string(t)), time(t) {}
};

/// Filesystem / serialization failure. CLI exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A measure failed its mass/positivity contract.
struct InvalidMeasure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejection loop exceeded its iteration cap (diagnostic, distinct from "uncoupled").
struct CouplingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller violated an operation contract (grid mismatch, inconsistent flags, ...).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few positive points to fit a decay rate.
struct FitDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace couplab
