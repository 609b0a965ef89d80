// basis.hpp — collective tensor-product basis over per-atom ladder levels {g, e, r}
//
// Ordering is lexicographic with g < e < r and atom 1 most significant, so
// index(|l_1 l_2 ... l_N>) = sum_k l_k * 3^(N-k). |g...g> is index 0 and
// |r...r> is index 3^N - 1.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ryd {

enum class Level : std::uint8_t { g = 0, e = 1, r = 2 };

char level_char(Level l) noexcept;

/// Default cap on the number of atoms; 3^8 = 6561 amplitudes.
inline constexpr int kMaxAtoms = 8;

class BasisState {
public:
    BasisState() = default;
    explicit BasisState(std::vector<Level> levels);

    /// Parses a label such as "grr". Throws std::invalid_argument on any
    /// character outside {g, e, r} or an empty label.
    static BasisState parse(std::string_view label);
    static BasisState uniform(int n_atoms, Level l);

    int n_atoms() const noexcept { return static_cast<int>(levels_.size()); }
    Level operator[](int atom) const { return levels_.at(static_cast<std::size_t>(atom)); }
    const std::vector<Level>& levels() const noexcept { return levels_; }
    int count(Level l) const noexcept;
    std::string label() const;

    bool operator==(const BasisState&) const = default;

private:
    std::vector<Level> levels_;
};

class CollectiveBasis {
public:
    int n_atoms() const noexcept { return n_atoms_; }
    std::size_t size() const noexcept { return states_.size(); }

    const BasisState& state(std::size_t index) const { return states_.at(index); }
    const std::vector<BasisState>& states() const noexcept { return states_; }
    std::string label(std::size_t index) const { return state(index).label(); }

    /// Throws std::invalid_argument if the state has the wrong atom count.
    std::size_t index(const BasisState& s) const;
    std::size_t index(std::string_view label) const { return index(BasisState::parse(label)); }

    /// Stride of atom k (0-based) in the flattened index: 3^(N-1-k).
    std::size_t stride(int atom) const;

private:
    friend CollectiveBasis enumerate_basis(int, int);
    int n_atoms_{0};
    std::vector<BasisState> states_;
};

/// All 3^N collective states in the fixed order. Throws SizeError when
/// n_atoms < 1 or n_atoms > max_atoms.
CollectiveBasis enumerate_basis(int n_atoms, int max_atoms = kMaxAtoms);

/// Indices of the N states with exactly one atom in g and the rest in r,
/// ordered by the position of the g atom (grr..., rgr..., ..., rr...g).
std::vector<std::size_t> single_ground_indices(const CollectiveBasis& basis);

std::size_t pow3(int n);

} // namespace ryd
