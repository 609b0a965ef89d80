#include "ryd/basis.hpp"

#include "ryd/errors.hpp"

#include <stdexcept>

namespace ryd {

char level_char(Level l) noexcept {
    switch (l) {
    case Level::g: return 'g';
    case Level::e: return 'e';
    case Level::r: return 'r';
    }
    return '?';
}

BasisState::BasisState(std::vector<Level> levels) : levels_(std::move(levels)) {}

BasisState BasisState::parse(std::string_view label) {
    if (label.empty()) {
        throw std::invalid_argument("BasisState: empty label");
    }
    std::vector<Level> levels;
    levels.reserve(label.size());
    for (char c : label) {
        switch (c) {
        case 'g': levels.push_back(Level::g); break;
        case 'e': levels.push_back(Level::e); break;
        case 'r': levels.push_back(Level::r); break;
        default:
            throw std::invalid_argument("BasisState: invalid level '" + std::string(1, c) +
                                        "' in label \"" + std::string(label) + "\"");
        }
    }
    return BasisState(std::move(levels));
}

BasisState BasisState::uniform(int n_atoms, Level l) {
    return BasisState(std::vector<Level>(static_cast<std::size_t>(n_atoms), l));
}

int BasisState::count(Level l) const noexcept {
    int n = 0;
    for (Level x : levels_) n += (x == l);
    return n;
}

std::string BasisState::label() const {
    std::string s;
    s.reserve(levels_.size());
    for (Level l : levels_) s.push_back(level_char(l));
    return s;
}

std::size_t pow3(int n) {
    std::size_t p = 1;
    for (int i = 0; i < n; ++i) p *= 3;
    return p;
}

std::size_t CollectiveBasis::index(const BasisState& s) const {
    if (s.n_atoms() != n_atoms_) {
        throw std::invalid_argument("CollectiveBasis: state \"" + s.label() + "\" has " +
                                    std::to_string(s.n_atoms()) + " atoms, basis has " +
                                    std::to_string(n_atoms_));
    }
    std::size_t idx = 0;
    for (Level l : s.levels()) idx = idx * 3 + static_cast<std::size_t>(l);
    return idx;
}

std::size_t CollectiveBasis::stride(int atom) const {
    if (atom < 0 || atom >= n_atoms_) throw std::out_of_range("CollectiveBasis::stride");
    return pow3(n_atoms_ - 1 - atom);
}

CollectiveBasis enumerate_basis(int n_atoms, int max_atoms) {
    if (n_atoms < 1) {
        throw SizeError("enumerate_basis: n_atoms must be >= 1, got " + std::to_string(n_atoms));
    }
    if (n_atoms > max_atoms) {
        throw SizeError("enumerate_basis: n_atoms=" + std::to_string(n_atoms) +
                        " exceeds the cap of " + std::to_string(max_atoms) + " (3^" +
                        std::to_string(n_atoms) + " states)");
    }
    CollectiveBasis basis;
    basis.n_atoms_ = n_atoms;
    const std::size_t dim = pow3(n_atoms);
    basis.states_.reserve(dim);
    std::vector<Level> levels(static_cast<std::size_t>(n_atoms));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::size_t rem = idx;
        for (int k = n_atoms - 1; k >= 0; --k) {
            levels[static_cast<std::size_t>(k)] = static_cast<Level>(rem % 3);
            rem /= 3;
        }
        basis.states_.emplace_back(levels);
    }
    return basis;
}

std::vector<std::size_t> single_ground_indices(const CollectiveBasis& basis) {
    const int n = basis.n_atoms();
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<Level> levels(static_cast<std::size_t>(n), Level::r);
        levels[static_cast<std::size_t>(k)] = Level::g;
        out.push_back(basis.index(BasisState(std::move(levels))));
    }
    return out;
}

} // namespace ryd
