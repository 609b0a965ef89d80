// AVX2/FMA kernels. Compiled with -mavx2 -mfma; only called after a runtime
// CPU check.

#include "ryd/kernels.hpp"

#include <immintrin.h>

namespace ryd::kernels {

namespace {

void apply_real(std::size_t dim, int n_atoms, const double* diag, double sign, double c1,
                double c2, const double* x, double* y) {
    const __m256d vs = _mm256_set1_pd(sign);
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        const __m256d d = _mm256_mul_pd(vs, _mm256_loadu_pd(diag + i));
        _mm256_storeu_pd(y + i, _mm256_mul_pd(d, _mm256_loadu_pd(x + i)));
    }
    for (; i < dim; ++i) y[i] = sign * diag[i] * x[i];

    const double a = sign * c1;
    const double b = sign * c2;
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
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
            std::size_t j = 0;
            for (; j + 4 <= stride; j += 4) {
                const __m256d g = _mm256_loadu_pd(xg + j);
                const __m256d e = _mm256_loadu_pd(xe + j);
                const __m256d r = _mm256_loadu_pd(xr + j);
                _mm256_storeu_pd(yg + j, _mm256_fmadd_pd(va, e, _mm256_loadu_pd(yg + j)));
                __m256d ev = _mm256_fmadd_pd(va, g, _mm256_loadu_pd(ye + j));
                ev = _mm256_fmadd_pd(vb, r, ev);
                _mm256_storeu_pd(ye + j, ev);
                _mm256_storeu_pd(yr + j, _mm256_fmadd_pd(vb, e, _mm256_loadu_pd(yr + j)));
            }
            for (; j < stride; ++j) {
                yg[j] += a * xe[j];
                ye[j] += a * xg[j] + b * xr[j];
                yr[j] += b * xe[j];
            }
        }
    }
}

void schrodinger_rhs(std::size_t dim, int n_atoms, const double* diag, double c1, double c2,
                     const double* psi, double* deriv) {
    apply_real(dim, n_atoms, diag, 1.0, c1, c2, psi + dim, deriv);
    apply_real(dim, n_atoms, diag, -1.0, c1, c2, psi, deriv + dim);
}

void combine(std::size_t n, const double* x, int m, const double* a, const double* const* k,
             double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(x + i);
        for (int j = 0; j < m; ++j) {
            acc = _mm256_fmadd_pd(_mm256_set1_pd(a[j]), _mm256_loadu_pd(k[j] + i), acc);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        double acc = x[i];
        for (int j = 0; j < m; ++j) acc += a[j] * k[j][i];
        out[i] = acc;
    }
}

void axpy_into(std::size_t n, double a, const double* x, const double* k, double* out) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(k + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void rk4_update(std::size_t n, double a, const double* k1, const double* k2, const double* k3,
                const double* k4, double* x) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
        s = _mm256_fmadd_pd(two, _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i)), s);
        _mm256_storeu_pd(x + i, _mm256_fmadd_pd(va, s, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] += a * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double sum_squares(std::size_t n, const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

constexpr KernelSet kAvx2{Isa::avx2, "avx2", schrodinger_rhs, combine, axpy_into, rk4_update, sum_squares};

} // namespace

const KernelSet* avx2_kernels_impl() { return &kAvx2; }

} // namespace ryd::kernels
