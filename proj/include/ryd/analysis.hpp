// analysis.hpp — bare-state spectrum, level crossings with |g...g>, the
// effective two-level reduction between |g...g> and |r...r>, and its dressed
// mixing angles.
//
// Everything here works in the quoted units of SystemSpec/PulseSpec; the
// angular convention only enters when an effective trajectory is integrated.

#pragma once

#include "ryd/basis.hpp"
#include "ryd/model.hpp"
#include "ryd/propagate.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ryd {

/// States sharing (n_e, n_r, interaction shift) have identical bare energies
/// at every time.
struct EnergyClass {
    BasisState representative;      ///< first member in basis order
    std::vector<std::size_t> members;
    int degeneracy() const noexcept { return static_cast<int>(members.size()); }
    /// Member labels joined by '_', e.g. "grr_rrg".
    std::string name(const CollectiveBasis& basis) const;
};

/// Classes ordered by Rydberg count, then excited count, then first member.
std::vector<EnergyClass> energy_classes(const CollectiveBasis& basis, const InteractionMatrix& v);

struct SpectrumTrace {
    std::vector<double> times;
    std::vector<EnergyClass> classes;
    std::vector<std::string> names;
    /// energies(i, c): bare energy of class c at times[i].
    Eigen::MatrixXd energies;
};

SpectrumTrace spectrum_trace(const SystemSpec& system, const PulseSpec& pulse,
                             const std::vector<double>& times);

/// Time at which the linear chirp brings |r...r> to zero energy:
///   t_c + (N*delta2 + 2*sum V) / (N*(alpha1 + alpha2)).
/// Ignores any chirp-off. Throws NoCrossingError when alpha1 + alpha2 == 0.
double resonance_time(const SystemSpec& system, const PulseSpec& pulse);

/// Times in the window where bare_energy(state, t) == 0, honouring chirp-off
/// and ramp. Empty when the state never crosses or is identically zero.
std::vector<double> crossing_times(const SystemSpec& system, const PulseSpec& pulse,
                                   const BasisState& state, TimeWindow window);

struct Crossing {
    std::string state;   ///< class name
    double time;
    int degeneracy;
};

/// Crossings of every energy class with |g...g> inside the window.
std::vector<Crossing> crossing_report(const SystemSpec& system, const PulseSpec& pulse,
                                      TimeWindow window);

struct EffectiveTwoLevel {
    SystemSpec system;
    PulseSpec pulse;
    double prefactor{1.0};
    Convention convention{Convention::direct};

    void validate() const;
};

/// c * Omega0(t)^6 / (Delta^2 V^3) with V the nearest-neighbour interaction
/// v(0,1) and Omega0(t)^6 = (Omega01(t) Omega02(t))^3. Throws SingularityError
/// for zero Delta or V.
double effective_rabi(const EffectiveTwoLevel& model, double t);

/// Integrates i da/dt = H a with H = [[0, -W], [-W, E_r(t)]], W the effective
/// Rabi frequency and E_r the bare energy of |r...r> (chirp-off honoured).
/// Column 0 is |g...g>, column 1 is |r...r>; the sample times match evolve()
/// for the same config.
Trajectory evolve_effective(const EffectiveTwoLevel& model, const IntegratorConfig& cfg);

struct Calibration {
    double prefactor;
    double residual;        ///< sum of squared P_ggg differences
    double max_deviation;   ///< max over samples of |P_eff - P_full|
};

/// Least-squares fit of the prefactor to P_g...g(t) of a full trajectory run
/// with the same config. Searches c over [c_min, c_max] on a log grid, then
/// refines by golden section.
Calibration calibrate_prefactor(const EffectiveTwoLevel& model, const IntegratorConfig& cfg,
                                const Trajectory& full, double c_min = 1e-3, double c_max = 1e3);

struct DressedAngles {
    std::vector<double> times;
    std::vector<double> cos_theta;
    std::vector<double> sin_theta;
    /// Samples where both W and the splitting vanish; angles are NaN there.
    std::vector<bool> undefined;
};

/// cos^2 = 1/2 + x / (2 sqrt(W^2 + x^2)) with x = -E_r(t)/2. After
/// chirp-off the angle is held at its value at the chirp-off time.
DressedAngles dressed_angles(const EffectiveTwoLevel& model, const std::vector<double>& times);

} // namespace ryd
