#include "ryd/model.hpp"

#include "ryd/errors.hpp"

#include <cmath>
#include <numbers>

namespace ryd {

std::string to_string(Convention c) {
    return c == Convention::direct ? "direct" : "two_pi";
}

std::string to_string(Coupling c) {
    return c == Coupling::half ? "half" : "full";
}

Convention parse_convention(const std::string& s) {
    if (s == "direct") return Convention::direct;
    if (s == "two_pi") return Convention::two_pi;
    throw ParameterError("unknown angular convention \"" + s + "\" (expected direct|two_pi)");
}

Coupling parse_coupling(const std::string& s) {
    if (s == "half") return Coupling::half;
    if (s == "full") return Coupling::full;
    throw ParameterError("unknown coupling convention \"" + s + "\" (expected half|full)");
}

double convention_scale(Convention c) noexcept {
    return c == Convention::two_pi ? 2.0 * std::numbers::pi : 1.0;
}

double coupling_weight(Coupling c) noexcept {
    return c == Coupling::half ? 0.5 : 1.0;
}

void SystemSpec::validate() const {
    if (n_atoms < 1) throw ParameterError("SystemSpec: n_atoms must be >= 1");
    if (v.rows() != n_atoms || v.cols() != n_atoms) {
        throw ParameterError("SystemSpec: interaction matrix is " + std::to_string(v.rows()) + "x" +
                             std::to_string(v.cols()) + ", expected " + std::to_string(n_atoms) +
                             "x" + std::to_string(n_atoms));
    }
    for (int i = 0; i < n_atoms; ++i) {
        if (v(i, i) != 0.0) {
            throw ParameterError("SystemSpec: interaction matrix diagonal must be zero (v[" +
                                 std::to_string(i) + "][" + std::to_string(i) + "])");
        }
        for (int j = 0; j < n_atoms; ++j) {
            if (!std::isfinite(v(i, j))) throw ParameterError("SystemSpec: non-finite interaction");
            if (v(i, j) < 0.0) throw ParameterError("SystemSpec: interactions must be nonnegative");
            if (v(i, j) != v(j, i)) {
                throw ParameterError("SystemSpec: interaction matrix is not symmetric (v[" +
                                     std::to_string(i) + "][" + std::to_string(j) + "] != v[" +
                                     std::to_string(j) + "][" + std::to_string(i) + "])");
            }
        }
    }
    if (!std::isfinite(delta1) || !std::isfinite(delta2)) {
        throw ParameterError("SystemSpec: detunings must be finite");
    }
}

double SystemSpec::pair_sum() const {
    double s = 0.0;
    for (int i = 0; i < v.rows(); ++i)
        for (int j = i + 1; j < v.cols(); ++j) s += v(i, j);
    return s;
}

void PulseSpec::validate() const {
    if (!(tau0 > 0.0)) throw ParameterError("PulseSpec: tau0 must be > 0");
    if (!(chirp_ramp >= 0.0)) throw ParameterError("PulseSpec: chirp_ramp must be >= 0");
    for (double x : {omega01, omega02, t_center, alpha1, alpha2}) {
        if (!std::isfinite(x)) throw ParameterError("PulseSpec: non-finite parameter");
    }
    if (chirp_off_time && !std::isfinite(*chirp_off_time)) {
        throw ParameterError("PulseSpec: non-finite chirp_off_time");
    }
}

LatticeSpec LatticeSpec::from_length(double c_coeff, int exponent, double length, int n_atoms) {
    if (n_atoms < 2) throw GeometryError("LatticeSpec: a lattice needs at least two atoms");
    return LatticeSpec{c_coeff, exponent, length / static_cast<double>(n_atoms - 1), n_atoms};
}

InteractionMatrix lattice_interactions(const LatticeSpec& spec) {
    if (spec.n_atoms < 2) throw GeometryError("lattice_interactions: need at least two atoms");
    if (spec.exponent != 3 && spec.exponent != 6) {
        throw GeometryError("lattice_interactions: exponent must be 3 or 6");
    }
    if (!(spec.spacing > 0.0) || !(spec.c_coeff > 0.0)) {
        throw GeometryError("lattice_interactions: spacing and coefficient must be positive");
    }
    InteractionMatrix v = InteractionMatrix::Zero(spec.n_atoms, spec.n_atoms);
    for (int i = 0; i < spec.n_atoms; ++i) {
        for (int j = i + 1; j < spec.n_atoms; ++j) {
            const double r = static_cast<double>(j - i) * spec.spacing;
            v(i, j) = v(j, i) = spec.c_coeff / std::pow(r, spec.exponent);
        }
    }
    return v;
}

InteractionMatrix chain_interactions(int n_atoms, double v_nn, std::optional<double> v_end) {
    if (n_atoms < 1) throw GeometryError("chain_interactions: n_atoms must be >= 1");
    InteractionMatrix v = InteractionMatrix::Zero(n_atoms, n_atoms);
    for (int i = 0; i + 1 < n_atoms; ++i) v(i, i + 1) = v(i + 1, i) = v_nn;
    if (v_end && n_atoms >= 3) v(0, n_atoms - 1) = v(n_atoms - 1, 0) = *v_end;
    return v;
}

double envelope_shape(const PulseSpec& pulse, double t) {
    const double x = (t - pulse.t_center) / pulse.tau0;
    return std::exp(-0.5 * x * x);
}

double rabi_envelope(const PulseSpec& pulse, int which, double t) {
    if (which != 1 && which != 2) throw std::invalid_argument("rabi_envelope: which must be 1 or 2");
    return (which == 1 ? pulse.omega01 : pulse.omega02) * envelope_shape(pulse, t);
}

double chirp_offset(const PulseSpec& pulse, double t) {
    if (!pulse.chirp_off_time) return t - pulse.t_center;
    const double off = *pulse.chirp_off_time;
    const double w = pulse.chirp_ramp;
    if (w <= 0.0) return (t <= off ? t : off) - pulse.t_center;
    const double start = off - 0.5 * w;
    if (t <= start) return t - pulse.t_center;
    if (t >= off + 0.5 * w) return off - pulse.t_center;
    const double u = t - start;
    return (start - pulse.t_center) + u - u * u / (2.0 * w);
}

Detunings effective_detunings(const SystemSpec& system, const PulseSpec& pulse, double t) {
    const double x = chirp_offset(pulse, t);
    return {system.delta1 - pulse.alpha1 * x, system.delta2 - (pulse.alpha1 + pulse.alpha2) * x};
}

double interaction_shift(const BasisState& state, const InteractionMatrix& v) {
    const int n = state.n_atoms();
    if (v.rows() != n || v.cols() != n) {
        throw std::invalid_argument("interaction_shift: dimension mismatch");
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        if (state[i] != Level::r) continue;
        for (int j = i + 1; j < n; ++j) {
            if (state[j] == Level::r) s += v(i, j);
        }
    }
    return 2.0 * s;
}

double bare_energy(const BasisState& state, const SystemSpec& system, const PulseSpec& pulse,
                   double t) {
    const Detunings d = effective_detunings(system, pulse, t);
    return state.count(Level::e) * d.single + state.count(Level::r) * d.two +
           interaction_shift(state, system.v);
}

double bare_energy_slope(const BasisState& state, const PulseSpec& pulse) {
    return -(state.count(Level::e) * pulse.alpha1 +
             state.count(Level::r) * (pulse.alpha1 + pulse.alpha2));
}

SystemSpec scaled(const SystemSpec& s, Convention c) {
    const double k = convention_scale(c);
    SystemSpec out = s;
    out.v = s.v * k;
    out.delta1 *= k;
    out.delta2 *= k;
    return out;
}

PulseSpec scaled(const PulseSpec& p, Convention c) {
    const double k = convention_scale(c);
    PulseSpec out = p;
    out.omega01 *= k;
    out.omega02 *= k;
    out.alpha1 *= k;
    out.alpha2 *= k;
    return out;
}

Model::Model(SystemSpec system, PulseSpec pulse, ModelOptions options)
    : system_(std::move(system)), pulse_(std::move(pulse)), options_(options) {
    system_.validate();
    pulse_.validate();
    scaled_system_ = scaled(system_, options_.convention);
    scaled_pulse_ = scaled(pulse_, options_.convention);
    basis_ = enumerate_basis(system_.n_atoms);
    const std::size_t d = basis_.size();
    n_e_.resize(d);
    n_r_.resize(d);
    shift_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        const BasisState& s = basis_.state(i);
        n_e_[i] = s.count(Level::e);
        n_r_[i] = s.count(Level::r);
        shift_[i] = interaction_shift(s, scaled_system_.v);
    }
}

void Model::diagonal(double t, double* out) const {
    const Detunings w = effective_detunings(scaled_system_, scaled_pulse_, t);
    for (std::size_t i = 0; i < n_e_.size(); ++i) {
        out[i] = n_e_[i] * w.single + n_r_[i] * w.two + shift_[i];
    }
}

std::pair<double, double> Model::couplings(double t) const {
    const double f = coupling_weight(options_.coupling) * envelope_shape(scaled_pulse_, t);
    return {f * scaled_pulse_.omega01, f * scaled_pulse_.omega02};
}

Eigen::MatrixXd Model::dense_real(double t) const {
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> diag(dim());
    diagonal(t, diag.data());
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = diag[static_cast<std::size_t>(i)];
    const auto [c1, c2] = couplings(t);
    for (int k = 0; k < n_atoms(); ++k) {
        const auto s = static_cast<Eigen::Index>(basis_.stride(k));
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto level = static_cast<Level>((i / s) % 3);
            if (level == Level::g) {
                h(i, i + s) = h(i + s, i) = c1;
            } else if (level == Level::e) {
                h(i, i + s) = h(i + s, i) = c2;
            }
        }
    }
    return h;
}

Eigen::MatrixXcd Model::dense(double t) const {
    return dense_real(t).cast<std::complex<double>>();
}

HamiltonianFrame build_hamiltonian(const SystemSpec& system, const PulseSpec& pulse, double t,
                                   const ModelOptions& options) {
    Model m(system, pulse, options);
    return {t, m.dense(t)};
}

} // namespace ryd
