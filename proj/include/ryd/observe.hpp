// observe.hpp — target-state fidelities and population diagnostics.

#pragma once

#include "ryd/basis.hpp"
#include "ryd/propagate.hpp"

#include <Eigen/Dense>

#include <string>

namespace ryd {

enum class TargetKind { ghz, w, custom };

struct TargetState {
    TargetKind kind{TargetKind::custom};
    Eigen::VectorXcd amplitudes;
};

/// (|g...g> + |r...r>) / sqrt(2)
TargetState ghz_target(const CollectiveBasis& basis);
/// Equal superposition of the N states with one atom in g and the rest in r.
TargetState w_target(const CollectiveBasis& basis);

/// |<target|psi>|^2
double overlap_fidelity(const TargetState& target, const StateVector& state);

/// Normalisation of the W fidelity sum: `normalized` divides by N (a true
/// overlap), `literal_half` divides by 2 regardless of N and can exceed 1.
enum class WPrefactor { normalized, literal_half };

double ghz_fidelity(const StateVector& state);
double w_fidelity(const StateVector& state, WPrefactor prefactor = WPrefactor::normalized);

double population(const StateVector& state, const BasisState& which);
double population_difference(const StateVector& state, const BasisState& a, const BasisState& b);
double w_population_sum(const StateVector& state);

/// Number of atoms implied by a state dimension of 3^N. Throws
/// std::invalid_argument if the dimension is not a power of three.
int atoms_for_dimension(std::size_t dim);

} // namespace ryd
