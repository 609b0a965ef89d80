#include "ryd/observe.hpp"

#include "ryd/errors.hpp"

#include <cmath>

namespace ryd {

int atoms_for_dimension(std::size_t dim) {
    int n = 0;
    std::size_t p = 1;
    while (p < dim) {
        p *= 3;
        ++n;
    }
    if (p != dim || dim == 0) {
        throw std::invalid_argument("state dimension " + std::to_string(dim) +
                                    " is not a power of three");
    }
    return n;
}

namespace {

int entangled_atoms(const StateVector& state) {
    const int n = atoms_for_dimension(state.dim());
    if (n < 2) {
        throw EntanglementUndefinedError(
            "entanglement fidelity is undefined for fewer than two atoms");
    }
    return n;
}

std::size_t all_level_index(int n, Level l) {
    return static_cast<std::size_t>(l) * ((pow3(n) - 1) / 2);
}

} // namespace

TargetState ghz_target(const CollectiveBasis& basis) {
    if (basis.n_atoms() < 2) throw EntanglementUndefinedError("GHZ target needs >= 2 atoms");
    TargetState t{TargetKind::ghz, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()))};
    const double a = 1.0 / std::sqrt(2.0);
    t.amplitudes(0) = a;
    t.amplitudes(static_cast<Eigen::Index>(basis.size() - 1)) = a;
    return t;
}

TargetState w_target(const CollectiveBasis& basis) {
    if (basis.n_atoms() < 2) throw EntanglementUndefinedError("W target needs >= 2 atoms");
    TargetState t{TargetKind::w, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()))};
    const double a = 1.0 / std::sqrt(static_cast<double>(basis.n_atoms()));
    for (std::size_t i : single_ground_indices(basis)) t.amplitudes(static_cast<Eigen::Index>(i)) = a;
    return t;
}

double overlap_fidelity(const TargetState& target, const StateVector& state) {
    if (target.amplitudes.size() != state.amplitudes.size()) {
        throw std::invalid_argument("overlap_fidelity: dimension mismatch");
    }
    return std::norm(target.amplitudes.dot(state.amplitudes));
}

double ghz_fidelity(const StateVector& state) {
    const int n = entangled_atoms(state);
    const auto& a = state.amplitudes;
    const auto ag = a(static_cast<Eigen::Index>(all_level_index(n, Level::g)));
    const auto ar = a(static_cast<Eigen::Index>(all_level_index(n, Level::r)));
    return 0.5 * (std::norm(ag) + std::norm(ar) + 2.0 * (ag * std::conj(ar)).real());
}

double w_fidelity(const StateVector& state, WPrefactor prefactor) {
    const int n = entangled_atoms(state);
    const CollectiveBasis basis = enumerate_basis(n);
    const auto idx = single_ground_indices(basis);
    const auto& a = state.amplitudes;
    double sum = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto ak = a(static_cast<Eigen::Index>(idx[k]));
        sum += std::norm(ak);
        for (std::size_t m = k + 1; m < idx.size(); ++m) {
            sum += 2.0 * (ak * std::conj(a(static_cast<Eigen::Index>(idx[m])))).real();
        }
    }
    const double scale = prefactor == WPrefactor::normalized ? 1.0 / n : 0.5;
    return scale * sum;
}

double population(const StateVector& state, const BasisState& which) {
    const int n = atoms_for_dimension(state.dim());
    if (which.n_atoms() != n) throw std::invalid_argument("population: atom count mismatch");
    std::size_t idx = 0;
    for (Level l : which.levels()) idx = idx * 3 + static_cast<std::size_t>(l);
    return std::norm(state.amplitudes(static_cast<Eigen::Index>(idx)));
}

double population_difference(const StateVector& state, const BasisState& a, const BasisState& b) {
    return population(state, a) - population(state, b);
}

double w_population_sum(const StateVector& state) {
    const int n = entangled_atoms(state);
    const CollectiveBasis basis = enumerate_basis(n);
    double s = 0.0;
    for (std::size_t i : single_ground_indices(basis)) {
        s += std::norm(state.amplitudes(static_cast<Eigen::Index>(i)));
    }
    return s;
}

} // namespace ryd
