// errors.hpp — exception types raised by the simulator

#pragma once

#include <stdexcept>
#include <string>

namespace ryd {

/// Requested state space exceeds the configured atom cap.
struct SizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid lattice geometry (fewer than two atoms, non-positive spacing, ...).
struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// System or pulse parameters violate their invariants.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Entanglement observables are undefined for a single atom.
struct EntanglementUndefinedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The linear chirp never brings the collective Rydberg level to resonance.
struct NoCrossingError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Effective two-level quantities are singular (zero detuning or interaction).
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Norm drift beyond the accepted bound; the step size is too coarse.
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Step refinement did not converge within the allowed number of halvings.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run configuration failed schema validation.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ryd
