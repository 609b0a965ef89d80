#include "ryd/propagate.hpp"

#include "ryd/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ryd {

std::string to_string(Stepper s) {
    return s == Stepper::rk4 ? "rk4" : "dopri5";
}

Stepper parse_stepper(const std::string& s) {
    if (s == "rk4") return Stepper::rk4;
    if (s == "dopri5") return Stepper::dopri5;
    throw ParameterError("unknown stepper \"" + s + "\" (expected rk4|dopri5)");
}

StateVector basis_vector(const CollectiveBasis& basis, const BasisState& s, double t) {
    StateVector v;
    v.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    v.amplitudes(static_cast<Eigen::Index>(basis.index(s))) = 1.0;
    v.time = t;
    return v;
}

StateVector ground_state(const CollectiveBasis& basis, double t) {
    return basis_vector(basis, BasisState::uniform(basis.n_atoms(), Level::g), t);
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ParameterError("IntegratorConfig: dt must be > 0");
    if (window && !(window->start < window->end)) {
        throw ParameterError("IntegratorConfig: window start must precede its end");
    }
    if (samples < 1) throw ParameterError("IntegratorConfig: samples must be >= 1");
    if (convergence_halvings < 0) {
        throw ParameterError("IntegratorConfig: convergence_halvings must be >= 0");
    }
}

TimeWindow resolve_window(const IntegratorConfig& cfg, const PulseSpec& pulse) {
    if (cfg.window) return *cfg.window;
    return {pulse.t_center - 3.0 * pulse.tau0, pulse.t_center + 3.0 * pulse.tau0};
}

StateVector Trajectory::sample(std::size_t row) const {
    return {amplitudes.row(static_cast<Eigen::Index>(row)).transpose(), times.at(row)};
}

Eigen::MatrixXd Trajectory::populations() const {
    return amplitudes.cwiseAbs2();
}

StepPlan plan_window(const IntegratorConfig& cfg, const PulseSpec& pulse) {
    cfg.validate();
    StepPlan plan;
    plan.window = resolve_window(cfg, pulse);
    if (!(plan.window.start < plan.window.end)) {
        throw ParameterError("evolve: empty time window");
    }
    const auto& off = pulse.chirp_off_time;
    if (off && (*off < plan.window.start || *off > plan.window.end)) {
        throw ParameterError("evolve: chirp_off_time lies outside the simulation window");
    }
    const double span = plan.window.end - plan.window.start;
    plan.steps = static_cast<std::size_t>(std::max(1.0, std::round(span / cfg.dt)));
    plan.dt = span / static_cast<double>(plan.steps);
    const std::size_t intervals = std::min<std::size_t>(static_cast<std::size_t>(cfg.samples),
                                                        plan.steps);
    plan.sample_steps.reserve(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        plan.sample_steps.push_back(static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(plan.steps) /
                         static_cast<double>(intervals))));
    }
    return plan;
}

namespace {

StepPlan plan_steps(const Model& model, const IntegratorConfig& cfg, const StateVector& initial) {
    if (initial.dim() != model.dim()) {
        throw std::invalid_argument("evolve: initial state has dimension " +
                                    std::to_string(initial.dim()) + ", basis has " +
                                    std::to_string(model.dim()));
    }
    if (std::abs(initial.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("evolve: initial state is not normalized");
    }
    return plan_window(cfg, model.pulse());
}

Trajectory make_trajectory(const StepPlan& plan, std::size_t dim) {
    Trajectory tr;
    tr.dt = plan.dt;
    tr.steps = plan.steps;
    tr.times.reserve(plan.sample_steps.size());
    tr.amplitudes.resize(static_cast<Eigen::Index>(plan.sample_steps.size()),
                         static_cast<Eigen::Index>(dim));
    return tr;
}

// A non-finite norm counts as infinite drift.
void note_drift(Trajectory& tr, double norm) {
    const double drift = std::isfinite(norm) ? std::abs(norm - 1.0)
                                             : std::numeric_limits<double>::infinity();
    tr.max_norm_drift = std::max(tr.max_norm_drift, drift);
}

double step_time(const StepPlan& plan, std::size_t step) {
    return plan.window.start + static_cast<double>(step) * plan.dt;
}

void check_drift(const Trajectory& tr, const IntegratorConfig& cfg, const char* who) {
    if (!(tr.max_norm_drift <= cfg.max_norm_drift)) {
        std::ostringstream os;
        os << who << ": norm drift " << tr.max_norm_drift << " exceeds " << cfg.max_norm_drift
           << " at dt=" << tr.dt << "; use a smaller dt";
        throw IntegrationError(os.str());
    }
}

} // namespace

namespace {

// Dormand-Prince 5(4) tableau; only the fifth-order solution is used.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};

} // namespace

Trajectory evolve(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                  const kernels::KernelSet& k) {
    const StepPlan plan = plan_steps(model, cfg, initial);
    const std::size_t dim = model.dim();
    const std::size_t n = 2 * dim;
    const int atoms = model.n_atoms();

    std::vector<double> psi(n), tmp(n);
    std::vector<std::vector<double>> ks(7, std::vector<double>(n));
    std::vector<double> d0(dim), dm(dim), d1(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto a = initial.amplitudes(static_cast<Eigen::Index>(i));
        psi[i] = a.real();
        psi[dim + i] = a.imag();
    }

    Trajectory tr = make_trajectory(plan, dim);
    std::size_t next_sample = 0;
    auto record = [&](std::size_t step) {
        const auto row = static_cast<Eigen::Index>(tr.times.size());
        tr.times.push_back(step_time(plan, step));
        for (std::size_t i = 0; i < dim; ++i) {
            tr.amplitudes(row, static_cast<Eigen::Index>(i)) = {psi[i], psi[dim + i]};
        }
        note_drift(tr, std::sqrt(k.sum_squares(n, psi.data())));
        ++next_sample;
    };

    const double h = plan.dt;
    auto rk4_step = [&](double t, std::pair<double, double> c_start) {
        const double t_mid = t + 0.5 * h;
        const double t_end = t + h;
        const auto c_mid = model.couplings(t_mid);
        const auto c_end = model.couplings(t_end);
        double* k1 = ks[0].data();
        double* k2 = ks[1].data();
        double* k3 = ks[2].data();
        double* k4 = ks[3].data();
        model.diagonal(t_mid, dm.data());
        model.diagonal(t_end, d1.data());
        k.schrodinger_rhs(dim, atoms, d0.data(), c_start.first, c_start.second, psi.data(), k1);
        k.axpy_into(n, 0.5 * h, psi.data(), k1, tmp.data());
        k.schrodinger_rhs(dim, atoms, dm.data(), c_mid.first, c_mid.second, tmp.data(), k2);
        k.axpy_into(n, 0.5 * h, psi.data(), k2, tmp.data());
        k.schrodinger_rhs(dim, atoms, dm.data(), c_mid.first, c_mid.second, tmp.data(), k3);
        k.axpy_into(n, h, psi.data(), k3, tmp.data());
        k.schrodinger_rhs(dim, atoms, d1.data(), c_end.first, c_end.second, tmp.data(), k4);
        k.rk4_update(n, h / 6.0, k1, k2, k3, k4, psi.data());
        return c_end;
    };
    // The seventh stage is evaluated at the new state and time, so it is the
    // first stage of the next step (FSAL).
    auto dopri_step = [&](double t, std::pair<double, double> c_start) {
        const double* kp[6];
        double a[6];
        std::pair<double, double> c = c_start;
        for (int s = 1; s < 7; ++s) {
            for (int j = 0; j < s; ++j) {
                kp[j] = ks[static_cast<std::size_t>(j)].data();
                a[j] = h * kA[s][j];
            }
            k.combine(n, psi.data(), s, a, kp, tmp.data());
            const double ts = t + kC[s] * h;
            c = model.couplings(ts);
            model.diagonal(ts, d1.data());
            k.schrodinger_rhs(dim, atoms, d1.data(), c.first, c.second, tmp.data(),
                              ks[static_cast<std::size_t>(s)].data());
        }
        std::copy(tmp.begin(), tmp.end(), psi.begin());
        ks[0].swap(ks[6]);
        return c;
    };

    model.diagonal(step_time(plan, 0), d0.data());
    auto c_start = model.couplings(step_time(plan, 0));
    const bool dopri = cfg.stepper == Stepper::dopri5;
    if (dopri) {
        k.schrodinger_rhs(dim, atoms, d0.data(), c_start.first, c_start.second, psi.data(),
                          ks[0].data());
    }
    record(0);
    for (std::size_t s = 0; s < plan.steps; ++s) {
        // Stage times are measured from the start of the step; the end time
        // is taken from the plan so no rounding accumulates.
        const double t = step_time(plan, s);
        if (dopri) {
            c_start = dopri_step(t, c_start);
        } else {
            c_start = rk4_step(t, c_start);
            d0.swap(d1);
        }
        if (next_sample < plan.sample_steps.size() && plan.sample_steps[next_sample] == s + 1) {
            record(s + 1);
        }
    }
    tr.final_state = tr.sample(tr.times.size() - 1);
    check_drift(tr, cfg, "evolve");
    return tr;
}

namespace {

// psi <- exp(-i H dt) psi for real symmetric H.
void apply_exponential(const Eigen::MatrixXd& h, double dt, Eigen::VectorXcd& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw IntegrationError("oracle: eigendecomposition failed");
    const Eigen::MatrixXd& u = es.eigenvectors();
    Eigen::VectorXcd c = u.transpose().cast<std::complex<double>>() * psi;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) *= std::polar(1.0, -es.eigenvalues()(i) * dt);
    }
    psi = u.cast<std::complex<double>>() * c;
}

} // namespace

Trajectory oracle_evolve(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                         OracleScheme scheme) {
    const StepPlan plan = plan_steps(model, cfg, initial);
    const std::size_t dim = model.dim();
    Eigen::VectorXcd psi = initial.amplitudes;
    Trajectory tr = make_trajectory(plan, dim);
    std::size_t next_sample = 0;
    auto record = [&](std::size_t step) {
        const auto row = static_cast<Eigen::Index>(tr.times.size());
        tr.times.push_back(step_time(plan, step));
        tr.amplitudes.row(row) = psi.transpose();
        note_drift(tr, psi.norm());
        ++next_sample;
    };

    // Gauss-Legendre nodes and weights of the commutator-free Magnus scheme.
    const double sq3 = std::sqrt(3.0);
    const double c_lo = 0.5 - sq3 / 6.0;
    const double c_hi = 0.5 + sq3 / 6.0;
    const double w_a = (3.0 - 2.0 * sq3) / 12.0;
    const double w_b = (3.0 + 2.0 * sq3) / 12.0;

    const double h = plan.dt;
    record(0);
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double t = step_time(plan, s);
        if (scheme == OracleScheme::midpoint) {
            apply_exponential(model.dense_real(t + 0.5 * h), h, psi);
        } else {
            const Eigen::MatrixXd h1 = model.dense_real(t + c_lo * h);
            const Eigen::MatrixXd h2 = model.dense_real(t + c_hi * h);
            apply_exponential(w_b * h1 + w_a * h2, h, psi);
            apply_exponential(w_a * h1 + w_b * h2, h, psi);
        }
        if (next_sample < plan.sample_steps.size() && plan.sample_steps[next_sample] == s + 1) {
            record(s + 1);
        }
    }
    tr.final_state = tr.sample(tr.times.size() - 1);
    check_drift(tr, cfg, "oracle_evolve");
    return tr;
}

ConvergedRun converge(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                      const Observable& observable) {
    if (cfg.convergence_halvings < 1) {
        throw ParameterError("converge: convergence_halvings must be >= 1");
    }
    IntegratorConfig run_cfg = cfg;
    Trajectory prev = evolve(model, run_cfg, initial);
    double prev_obs = observable(prev.final_state);
    double change = 0.0;
    for (int k = 1; k <= cfg.convergence_halvings; ++k) {
        run_cfg.dt *= 0.5;
        Trajectory next = evolve(model, run_cfg, initial);
        const double obs = observable(next.final_state);
        change = std::abs(obs - prev_obs);
        if (change < cfg.convergence_tolerance) {
            const double dt = next.dt;
            return {std::move(next), dt, k, change};
        }
        prev = std::move(next);
        prev_obs = obs;
    }
    std::ostringstream os;
    os << "converge: observable still changed by " << change << " after "
       << cfg.convergence_halvings << " halvings (dt=" << prev.dt << ", tolerance "
       << cfg.convergence_tolerance << ")";
    throw ToleranceError(os.str());
}

} // namespace ryd
