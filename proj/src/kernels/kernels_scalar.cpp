// Scalar reference kernels.

#include "ryd/kernels.hpp"

namespace ryd::kernels {

namespace {

// y = sign * H x on one real component.
void apply_real(std::size_t dim, int n_atoms, const double* diag, double sign, double c1,
                double c2, const double* x, double* y) {
    for (std::size_t i = 0; i < dim; ++i) y[i] = sign * diag[i] * x[i];
    const double a = sign * c1;
    const double b = sign * c2;
    std::size_t stride = dim;
    for (int k = 0; k < n_atoms; ++k) {
        stride /= 3;
        const std::size_t block = 3 * stride;
        for (std::size_t base = 0; base < dim; base += block) {
            double* yg = y + base;
            double* ye = yg + stride;
            double* yr = ye + stride;
            const double* xg = x + base;
            const double* xe = xg + stride;
            const double* xr = xe + stride;
            for (std::size_t j = 0; j < stride; ++j) {
                yg[j] += a * xe[j];
                ye[j] += a * xg[j] + b * xr[j];
                yr[j] += b * xe[j];
            }
        }
    }
}

void schrodinger_rhs(std::size_t dim, int n_atoms, const double* diag, double c1, double c2,
                     const double* psi, double* deriv) {
    // d(re)/dt = H im,  d(im)/dt = -H re
    apply_real(dim, n_atoms, diag, 1.0, c1, c2, psi + dim, deriv);
    apply_real(dim, n_atoms, diag, -1.0, c1, c2, psi, deriv + dim);
}

void combine(std::size_t n, const double* x, int m, const double* a, const double* const* k,
             double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = x[i];
        for (int j = 0; j < m; ++j) acc += a[j] * k[j][i];
        out[i] = acc;
    }
}

void axpy_into(std::size_t n, double a, const double* x, const double* k, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_update(std::size_t n, double a, const double* k1, const double* k2, const double* k3,
                const double* k4, double* x) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] += a * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

double sum_squares(std::size_t n, const double* x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

constexpr KernelSet kScalar{Isa::scalar, "scalar", schrodinger_rhs, combine, axpy_into, rk4_update,
                            sum_squares};

} // namespace

const KernelSet& scalar_kernels() { return kScalar; }

} // namespace ryd::kernels
