#include "ryd/analysis.hpp"

#include "ryd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <tuple>

namespace ryd {

std::string EnergyClass::name(const CollectiveBasis& basis) const {
    std::string out;
    for (std::size_t i : members) {
        if (!out.empty()) out += '_';
        out += basis.label(i);
    }
    return out;
}

std::vector<EnergyClass> energy_classes(const CollectiveBasis& basis, const InteractionMatrix& v) {
    // Bare energies are n_e*w2 + n_r*w3 + shift, so equal (n_e, n_r, shift)
    // means equal energy for all parameter values. Shifts are sums of the
    // same matrix entries, so exact comparison is safe for equal inputs.
    std::map<std::tuple<int, int, double>, std::size_t> lookup;
    std::vector<EnergyClass> classes;
    std::vector<std::pair<int, int>> counts;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const BasisState& s = basis.state(i);
        const int ne = s.count(Level::e);
        const int nr = s.count(Level::r);
        const auto key = std::make_tuple(ne, nr, interaction_shift(s, v));
        auto [it, fresh] = lookup.emplace(key, classes.size());
        if (fresh) {
            classes.push_back({s, {}});
            counts.emplace_back(nr, ne);
        }
        classes[it->second].members.push_back(i);
    }
    std::vector<std::size_t> order(classes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return counts[a] < counts[b];
    });
    std::vector<EnergyClass> sorted;
    sorted.reserve(classes.size());
    for (std::size_t i : order) sorted.push_back(std::move(classes[i]));
    return sorted;
}

SpectrumTrace spectrum_trace(const SystemSpec& system, const PulseSpec& pulse,
                             const std::vector<double>& times) {
    system.validate();
    pulse.validate();
    const CollectiveBasis basis = enumerate_basis(system.n_atoms);
    SpectrumTrace tr;
    tr.times = times;
    tr.classes = energy_classes(basis, system.v);
    for (const auto& c : tr.classes) tr.names.push_back(c.name(basis));
    tr.energies.resize(static_cast<Eigen::Index>(times.size()),
                       static_cast<Eigen::Index>(tr.classes.size()));
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t c = 0; c < tr.classes.size(); ++c) {
            tr.energies(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                bare_energy(tr.classes[c].representative, system, pulse, times[i]);
        }
    }
    return tr;
}

double resonance_time(const SystemSpec& system, const PulseSpec& pulse) {
    const double rate = pulse.alpha1 + pulse.alpha2;
    if (rate == 0.0) {
        throw NoCrossingError("resonance_time: alpha1 + alpha2 = 0, |r...r> never crosses");
    }
    const double n = system.n_atoms;
    return pulse.t_center + (n * system.delta2 + 2.0 * system.pair_sum()) / (n * rate);
}

namespace {

// Smallest t in the window with chirp_offset(t) == target, if any. The
// offset is continuous and nondecreasing: linear, then a quadratic ramp,
// then constant.
std::vector<double> solve_offset(const PulseSpec& p, double target, TimeWindow window) {
    std::vector<double> out;
    auto keep = [&](double t) {
        if (t >= window.start && t <= window.end) out.push_back(t);
    };
    const double tc = p.t_center;
    if (!p.chirp_off_time) {
        keep(tc + target);
        return out;
    }
    const double off = *p.chirp_off_time;
    const double w = p.chirp_ramp;
    const double start = w > 0.0 ? off - 0.5 * w : off;
    if (tc + target <= start) {
        keep(tc + target);
        return out;
    }
    if (w > 0.0) {
        // u - u^2/(2w) = d on u in [0, w]
        const double d = target - (start - tc);
        if (d <= 0.5 * w) {
            keep(start + w * (1.0 - std::sqrt(std::max(0.0, 1.0 - 2.0 * d / w))));
        }
    }
    return out;
}

} // namespace

std::vector<double> crossing_times(const SystemSpec& system, const PulseSpec& pulse,
                                   const BasisState& state, TimeWindow window) {
    // E(t) = a - b * chirp_offset(t)
    const double ne = state.count(Level::e);
    const double nr = state.count(Level::r);
    const double a = ne * system.delta1 + nr * system.delta2 + interaction_shift(state, system.v);
    const double b = ne * pulse.alpha1 + nr * (pulse.alpha1 + pulse.alpha2);
    if (b == 0.0) return {};
    return solve_offset(pulse, a / b, window);
}

std::vector<Crossing> crossing_report(const SystemSpec& system, const PulseSpec& pulse,
                                      TimeWindow window) {
    const CollectiveBasis basis = enumerate_basis(system.n_atoms);
    std::vector<Crossing> out;
    for (const auto& c : energy_classes(basis, system.v)) {
        for (double t : crossing_times(system, pulse, c.representative, window)) {
            out.push_back({c.name(basis), t, c.degeneracy()});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Crossing& x, const Crossing& y) { return x.time < y.time; });
    return out;
}

void EffectiveTwoLevel::validate() const {
    system.validate();
    pulse.validate();
    if (system.n_atoms < 2) throw SingularityError("effective model needs at least two atoms");
    if (!(prefactor > 0.0)) throw ParameterError("effective model: prefactor must be > 0");
    if (system.delta1 == 0.0) throw SingularityError("effective model: Delta = 0");
    if (!(system.v(0, 1) > 0.0)) throw SingularityError("effective model: V = 0");
}

double effective_rabi(const EffectiveTwoLevel& m, double t) {
    m.validate();
    const double o = rabi_envelope(m.pulse, 1, t) * rabi_envelope(m.pulse, 2, t);
    const double v = m.system.v(0, 1);
    const double d = m.system.delta1;
    return m.prefactor * o * o * o / (d * d * v * v * v);
}

namespace {

double rydberg_energy(const EffectiveTwoLevel& m, const BasisState& top, double t) {
    return bare_energy(top, m.system, m.pulse, t);
}

// psi <- exp(-i h H) psi for real symmetric 2x2 H = [[p, q], [q, r]].
void apply_2x2(double p, double q, double r, double h, std::complex<double>& a0,
               std::complex<double>& a1) {
    const double mean = 0.5 * (p + r);
    const double half = 0.5 * (p - r);
    const double w = std::hypot(half, q);
    const std::complex<double> phase = std::polar(1.0, -mean * h);
    const double c = std::cos(w * h);
    const double s = w > 0.0 ? std::sin(w * h) / w : h;
    const std::complex<double> mi(0.0, -1.0);
    const std::complex<double> b0 = c * a0 + mi * s * (half * a0 + q * a1);
    const std::complex<double> b1 = c * a1 + mi * s * (q * a0 - half * a1);
    a0 = phase * b0;
    a1 = phase * b1;
}

} // namespace

Trajectory evolve_effective(const EffectiveTwoLevel& model, const IntegratorConfig& cfg) {
    model.validate();
    const StepPlan plan = plan_window(cfg, model.pulse);
    const double k = convention_scale(model.convention);
    const BasisState top = BasisState::uniform(model.system.n_atoms, Level::r);

    std::complex<double> a0 = 1.0;
    std::complex<double> a1 = 0.0;
    Trajectory tr;
    tr.dt = plan.dt;
    tr.steps = plan.steps;
    tr.amplitudes.resize(static_cast<Eigen::Index>(plan.sample_steps.size()), 2);
    std::size_t next = 0;
    auto record = [&](std::size_t step) {
        const auto row = static_cast<Eigen::Index>(tr.times.size());
        tr.times.push_back(plan.window.start + static_cast<double>(step) * plan.dt);
        tr.amplitudes(row, 0) = a0;
        tr.amplitudes(row, 1) = a1;
        const double drift = std::abs(std::sqrt(std::norm(a0) + std::norm(a1)) - 1.0);
        tr.max_norm_drift = std::max(tr.max_norm_drift, drift);
        ++next;
    };
    record(0);
    // Exponential midpoint rule; the 2x2 exponential is exact, so the norm is
    // preserved to rounding.
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double tm = plan.window.start + (static_cast<double>(s) + 0.5) * plan.dt;
        const double w = k * effective_rabi(model, tm);
        const double e = k * rydberg_energy(model, top, tm);
        apply_2x2(0.0, -w, e, plan.dt, a0, a1);
        if (next < plan.sample_steps.size() && plan.sample_steps[next] == s + 1) record(s + 1);
    }
    tr.final_state = tr.sample(tr.times.size() - 1);
    return tr;
}

Calibration calibrate_prefactor(const EffectiveTwoLevel& model, const IntegratorConfig& cfg,
                                const Trajectory& full, double c_min, double c_max) {
    if (!(c_min > 0.0) || !(c_max > c_min)) {
        throw ParameterError("calibrate_prefactor: need 0 < c_min < c_max");
    }
    const Eigen::VectorXd target = full.amplitudes.col(0).cwiseAbs2();
    auto fit = [&](double log_c) {
        EffectiveTwoLevel m = model;
        m.prefactor = std::exp(log_c);
        const Trajectory eff = evolve_effective(m, cfg);
        if (eff.times.size() != full.times.size()) {
            throw std::invalid_argument("calibrate_prefactor: sample grids differ");
        }
        const Eigen::VectorXd diff = eff.amplitudes.col(0).cwiseAbs2() - target;
        return std::make_pair(diff.squaredNorm(), diff.cwiseAbs().maxCoeff());
    };

    // The residual is far from unimodal in c: the accumulated dynamical phase
    // makes it oscillate within a few percent of c. A fine log grid (about
    // 1.2% spacing over six decades) brackets the best minimum before refining.
    const int grid = 1201;
    const double lo = std::log(c_min);
    const double hi = std::log(c_max);
    const double step = (hi - lo) / (grid - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const double r = fit(lo + i * step).first;
        if (r < best_val) {
            best_val = r;
            best = i;
        }
    }
    double a = lo + std::max(0, best - 1) * step;
    double b = lo + std::min(grid - 1, best + 1) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = fit(x1).first;
    double f2 = fit(x2).first;
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = fit(x1).first;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = fit(x2).first;
        }
    }
    double x = 0.5 * (a + b);
    auto [res, dev] = fit(x);
    if (best_val < res) {
        x = lo + best * step;
        std::tie(res, dev) = fit(x);
    }
    return {std::exp(x), res, dev};
}

DressedAngles dressed_angles(const EffectiveTwoLevel& model, const std::vector<double>& times) {
    model.validate();
    const BasisState top = BasisState::uniform(model.system.n_atoms, Level::r);
    DressedAngles out;
    out.times = times;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double t : times) {
        const double te =
            model.pulse.chirp_off_time && t > *model.pulse.chirp_off_time ? *model.pulse.chirp_off_time
                                                                          : t;
        const double w = effective_rabi(model, te);
        const double x = -0.5 * rydberg_energy(model, top, te);
        const double r = std::hypot(w, x);
        if (r == 0.0) {
            out.cos_theta.push_back(nan);
            out.sin_theta.push_back(nan);
            out.undefined.push_back(true);
            continue;
        }
        const double c2 = 0.5 + x / (2.0 * r);
        const double s2 = 0.5 - x / (2.0 * r);
        out.cos_theta.push_back(std::sqrt(std::max(0.0, c2)));
        out.sin_theta.push_back(std::sqrt(std::max(0.0, s2)));
        out.undefined.push_back(false);
    }
    return out;
}

} // namespace ryd
