// Scalar and AVX2 kernels must agree; the scalar kernels are checked against
// a dense matrix-vector product.

#include "ryd/kernels.hpp"
#include "ryd/model.hpp"
#include "ryd/propagate.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace ryd;
using namespace ryd::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

const KernelSet* simd() {
    const KernelSet* k = avx2_kernels();
    return k && cpu_supports(Isa::avx2) ? k : nullptr;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("scalar rhs matches dense -iH psi") {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 5; ++n) {
        SystemSpec s{n, InteractionMatrix::Zero(n, n), -800, -30};
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s.v(i, j) = s.v(j, i) = 10.0 + i + 2 * j;
        PulseSpec p;
        p.omega01 = 120;
        p.omega02 = 90;
        p.alpha1 = -40;
        p.alpha2 = -25;
        const Model m(s, p);
        const double t = 2.3;
        const std::size_t d = m.dim();
        std::vector<double> diag(d);
        m.diagonal(t, diag.data());
        const auto [c1, c2] = m.couplings(t);
        const auto psi = random_vec(2 * d, rng);
        std::vector<double> out(2 * d);
        scalar_kernels().schrodinger_rhs(d, n, diag.data(), c1, c2, psi.data(), out.data());

        Eigen::VectorXcd z(d);
        for (std::size_t i = 0; i < d; ++i) z(i) = {psi[i], psi[d + i]};
        const Eigen::VectorXcd ref = std::complex<double>(0, -1) * (m.dense(t) * z);
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(out[i] == doctest::Approx(ref(i).real()).epsilon(1e-12));
            CHECK(out[d + i] == doctest::Approx(ref(i).imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("avx2 kernels equal scalar kernels") {
    const KernelSet* v = simd();
    if (!v) {
        MESSAGE("AVX2 variant unavailable; equivalence not exercised");
        return;
    }
    const KernelSet& s = scalar_kernels();
    std::mt19937_64 rng(7);
    for (int n = 1; n <= 6; ++n) {
        const std::size_t d = pow3(n);
        const auto diag = random_vec(d, rng);
        const auto psi = random_vec(2 * d, rng);
        std::vector<double> a(2 * d), b(2 * d);
        s.schrodinger_rhs(d, n, diag.data(), 0.7, -1.3, psi.data(), a.data());
        v->schrodinger_rhs(d, n, diag.data(), 0.7, -1.3, psi.data(), b.data());
        CHECK(max_diff(a, b) <= 1e-12);
    }
    for (std::size_t n : {1u, 3u, 4u, 7u, 54u, 163u}) {
        const auto x = random_vec(n, rng);
        std::vector<std::vector<double>> ks;
        for (int j = 0; j < 6; ++j) ks.push_back(random_vec(n, rng));
        const double* kp[6];
        for (int j = 0; j < 6; ++j) kp[j] = ks[j].data();
        const double coef[6] = {0.1, -0.2, 0.3, 0.05, 1.5, -0.7};
        std::vector<double> a(n), b(n);
        for (int m = 1; m <= 6; ++m) {
            s.combine(n, x.data(), m, coef, kp, a.data());
            v->combine(n, x.data(), m, coef, kp, b.data());
            CHECK(max_diff(a, b) <= 1e-13);
        }
        s.axpy_into(n, 0.37, x.data(), kp[0], a.data());
        v->axpy_into(n, 0.37, x.data(), kp[0], b.data());
        CHECK(max_diff(a, b) <= 1e-14);
        a = x;
        b = x;
        s.rk4_update(n, 0.1, kp[0], kp[1], kp[2], kp[3], a.data());
        v->rk4_update(n, 0.1, kp[0], kp[1], kp[2], kp[3], b.data());
        CHECK(max_diff(a, b) <= 1e-13);
        CHECK(s.sum_squares(n, x.data()) == doctest::Approx(v->sum_squares(n, x.data())).epsilon(1e-13));
    }
}

TEST_CASE("full propagation agrees across kernel variants") {
    const KernelSet* v = simd();
    if (!v) return;
    SystemSpec s{3, chain_interactions(3, 60, 30), -1400, -4.5};
    PulseSpec p;
    p.omega01 = p.omega02 = 262;
    p.alpha1 = p.alpha2 = -32;
    const Model m(s, p);
    IntegratorConfig cfg;
    cfg.samples = 10;
    for (Stepper st : {Stepper::rk4, Stepper::dopri5}) {
        cfg.stepper = st;
        const auto a = evolve(m, cfg, ground_state(m.basis()), scalar_kernels());
        const auto b = evolve(m, cfg, ground_state(m.basis()), *v);
        CHECK((a.final_state.amplitudes - b.final_state.amplitudes).norm() <= 1e-10);
    }
}

TEST_CASE("kernel selection by name") {
    CHECK(kernels_by_name("scalar").isa == Isa::scalar);
    CHECK(kernels_by_name("bogus").isa == Isa::scalar);
    if (simd()) CHECK(kernels_by_name("avx2").isa == Isa::avx2);
}
