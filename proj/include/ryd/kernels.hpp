// kernels.hpp — arithmetic inner loops of the propagators.
//
// A scalar reference implementation is always built. An AVX2/FMA variant is
// compiled separately and selected at runtime when the CPU supports it; the
// environment variable RYD_KERNELS=scalar|avx2 forces a choice. Both variants
// are equivalence-tested against each other.
//
// State layout: a complex vector of dimension d is stored as 2d doubles,
// real parts first, then imaginary parts.

#pragma once

#include <cstddef>
#include <string_view>

namespace ryd::kernels {

enum class Isa { scalar, avx2 };

struct KernelSet {
    Isa isa;
    const char* name;

    /// deriv = -i H psi for the ladder Hamiltonian
    ///   H = diag(diag) + sum_k [c1 (|g><e| + |e><g|)_k + c2 (|e><r| + |r><e|)_k]
    /// over the 3^n_atoms collective basis.
    void (*schrodinger_rhs)(std::size_t dim, int n_atoms, const double* diag, double c1, double c2,
                            const double* psi, double* deriv);

    /// out = x + sum_j a[j] * k[j] for j < m
    void (*combine)(std::size_t n, const double* x, int m, const double* a,
                    const double* const* k, double* out);

    /// out = x + a * k
    void (*axpy_into)(std::size_t n, double a, const double* x, const double* k, double* out);

    /// x += a * (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_update)(std::size_t n, double a, const double* k1, const double* k2,
                       const double* k3, const double* k4, double* x);

    /// sum of squares of n values
    double (*sum_squares)(std::size_t n, const double* x);
};

const KernelSet& scalar_kernels();

/// Nullptr when the variant was not compiled in.
const KernelSet* avx2_kernels();

bool cpu_supports(Isa isa);

/// Best supported variant, honouring RYD_KERNELS. Resolved once.
const KernelSet& active_kernels();

/// Variant by name ("scalar" or "avx2"); falls back to scalar if unavailable.
const KernelSet& kernels_by_name(std::string_view name);

} // namespace ryd::kernels
