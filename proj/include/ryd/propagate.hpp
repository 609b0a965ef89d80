// propagate.hpp — time-dependent Schrodinger equation i da/dt = H(t) a (hbar = 1)
// over the collective basis.
//
// evolve() is the production path (fixed-step Dormand-Prince or RK4).
// oracle_evolve() is an independent exponential propagator built on a dense Hermitian
// eigendecomposition per step; it exists to cross-check evolve().

#pragma once

#include "ryd/kernels.hpp"
#include "ryd/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ryd {

struct StateVector {
    Eigen::VectorXcd amplitudes;
    double time{0.0};

    double norm() const { return amplitudes.norm(); }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
};

/// Unit amplitude on a single basis state.
StateVector basis_vector(const CollectiveBasis& basis, const BasisState& s, double t = 0.0);
/// |g...g>
StateVector ground_state(const CollectiveBasis& basis, double t = 0.0);

struct TimeWindow {
    double start;
    double end;
};

enum class Stepper {
    /// Classical RK4 on i da/dt = H(t) a.
    rk4,
    /// Fixed-step Dormand-Prince fifth-order Runge-Kutta (six new stages per
    /// step). Much smaller phase error on the far-detuned intermediate level.
    dopri5,
};

std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& s);

struct IntegratorConfig {
    double dt{1e-4};
    Stepper stepper{Stepper::dopri5};
    /// Defaults to [t_c - 3 tau0, t_c + 3 tau0].
    std::optional<TimeWindow> window;
    int convergence_halvings{6};
    double convergence_tolerance{1e-6};
    /// Number of sampling intervals; samples+1 rows including both ends.
    int samples{1000};
    /// Runs whose norm drifts further than this are rejected.
    double max_norm_drift{1e-4};

    void validate() const;
};

TimeWindow resolve_window(const IntegratorConfig& cfg, const PulseSpec& pulse);

/// Uniform step grid over the window: steps = round(span / dt), so the
/// effective dt is span / steps. Samples are taken at step indices
/// round(k * steps / samples), k = 0..samples.
struct StepPlan {
    TimeWindow window;
    std::size_t steps;
    double dt;
    std::vector<std::size_t> sample_steps;
};

StepPlan plan_window(const IntegratorConfig& cfg, const PulseSpec& pulse);

struct Trajectory {
    std::vector<double> times;
    /// Sampled amplitudes, one row per sample time.
    Eigen::MatrixXcd amplitudes;
    StateVector final_state;
    /// Largest | ||a(t)|| - 1 | over the sampled times.
    double max_norm_drift{0.0};
    double dt{0.0};
    std::size_t steps{0};

    std::size_t sample_count() const { return times.size(); }
    StateVector sample(std::size_t row) const;
    /// Populations |a|^2, one row per sample time.
    Eigen::MatrixXd populations() const;
};

/// Fixed-step integration with cfg.stepper. Throws
/// IntegrationError when the norm drifts by more than
/// cfg.max_norm_drift.
Trajectory evolve(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                  const kernels::KernelSet& kernels = kernels::active_kernels());

enum class OracleScheme {
    midpoint,   ///< exp(-i H(t + dt/2) dt), second order
    magnus4,    ///< commutator-free fourth-order Magnus, two exponentials per step
};

Trajectory oracle_evolve(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                         OracleScheme scheme = OracleScheme::magnus4);

using Observable = std::function<double(const StateVector&)>;

struct ConvergedRun {
    Trajectory trajectory;
    double achieved_dt;
    int halvings;
    double last_change;
};

/// Halves dt until the observable at the final time changes by less than
/// cfg.convergence_tolerance between successive runs. Throws ToleranceError
/// after cfg.convergence_halvings halvings without convergence.
ConvergedRun converge(const Model& model, const IntegratorConfig& cfg, const StateVector& initial,
                      const Observable& observable);

} // namespace ryd
