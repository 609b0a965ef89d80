// model.hpp — system and pulse parameters, bare energies and the collective
// field-interaction Hamiltonian for N three-level ladder atoms.
//
// Units: frequencies in MHz-equivalent, times in us, chirp rates in MHz/us.
// Under Convention::direct the quoted figures are used as angular
// frequencies (rad/us) as-is; Convention::two_pi multiplies every frequency
// and chirp rate by 2*pi before they enter the dynamics.

#pragma once

#include "ryd/basis.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace ryd {

using InteractionMatrix = Eigen::MatrixXd;

enum class Convention { direct, two_pi };

/// Off-diagonal Rabi weight: `half` puts Omega/2 on each one-photon
/// coupling, `full` puts Omega.
enum class Coupling { half, full };

std::string to_string(Convention c);
std::string to_string(Coupling c);
Convention parse_convention(const std::string& s);
Coupling parse_coupling(const std::string& s);

double convention_scale(Convention c) noexcept;
double coupling_weight(Coupling c) noexcept;

struct SystemSpec {
    int n_atoms{3};
    InteractionMatrix v;    ///< symmetric, zero diagonal, nonnegative
    double delta1{0.0};     ///< one-photon detuning
    double delta2{0.0};     ///< two-photon detuning

    /// Throws ParameterError when an invariant is violated.
    void validate() const;
    /// Sum over unordered pairs i<j of v(i,j).
    double pair_sum() const;
};

struct PulseSpec {
    double omega01{0.0};
    double omega02{0.0};
    double tau0{1.0};
    double t_center{3.0};
    double alpha1{0.0};
    double alpha2{0.0};
    /// Time after which both chirps stop; the instantaneous frequencies are
    /// held at their values at this time.
    std::optional<double> chirp_off_time;
    /// Width of a linear ramp of the chirp rate to zero, centred on
    /// chirp_off_time. Zero means an abrupt stop.
    double chirp_ramp{0.0};

    void validate() const;
};

struct LatticeSpec {
    double c_coeff{1.0};
    int exponent{6};
    double spacing{1.0};
    int n_atoms{3};

    /// Equidistant chain of total length s: spacing = s / (n - 1).
    static LatticeSpec from_length(double c_coeff, int exponent, double length, int n_atoms);
};

/// v(i,j) = c_coeff / (|i-j| * spacing)^exponent. Throws GeometryError.
InteractionMatrix lattice_interactions(const LatticeSpec& spec);

/// Nearest-neighbour chain with an explicit end-to-end value; used for the
/// three-atom configurations V21 = V32 = v_nn with an independent V31.
InteractionMatrix chain_interactions(int n_atoms, double v_nn, std::optional<double> v_end = {});

/// Rabi envelope of pulse 1 or 2: Omega_0i * exp(-(t - t_c)^2 / (2 tau0^2)).
double rabi_envelope(const PulseSpec& pulse, int which, double t);

/// Shape factor exp(-(t - t_c)^2 / (2 tau0^2)) shared by both pulses.
double envelope_shape(const PulseSpec& pulse, double t);

/// Effective elapsed chirp time: t - t_c while the chirp is on, frozen at
/// chirp_off_time - t_c afterwards, with a quadratic blend over the ramp.
double chirp_offset(const PulseSpec& pulse, double t);

struct Detunings {
    double single;   ///< omega_2(t) = Delta - alpha1 * chirp_offset
    double two;      ///< omega_3(t) = delta - (alpha1 + alpha2) * chirp_offset
};

Detunings effective_detunings(const SystemSpec& system, const PulseSpec& pulse, double t);

/// 2 * sum over unordered Rydberg pairs of v(i,j).
double interaction_shift(const BasisState& state, const InteractionMatrix& v);

double bare_energy(const BasisState& state, const SystemSpec& system, const PulseSpec& pulse,
                   double t);

/// Slope of bare_energy while the chirp is on: -(n_e*alpha1 + n_r*(alpha1+alpha2)).
double bare_energy_slope(const BasisState& state, const PulseSpec& pulse);

struct ModelOptions {
    Convention convention{Convention::direct};
    Coupling coupling{Coupling::half};
};

/// Copies of the specs with every frequency and chirp rate scaled by the
/// convention factor. Times are unchanged.
SystemSpec scaled(const SystemSpec& s, Convention c);
PulseSpec scaled(const PulseSpec& p, Convention c);

struct HamiltonianFrame {
    double time{0.0};
    Eigen::MatrixXcd matrix;
};

HamiltonianFrame build_hamiltonian(const SystemSpec& system, const PulseSpec& pulse, double t,
                                   const ModelOptions& options = {});

/// Precomputed form of the collective Hamiltonian used by the propagators:
///   H(t) = diag(n_e*w2(t) + n_r*w3(t) + shift) + sum_k L_k(c1(t), c2(t))
/// where L_k couples g<->e with c1 and e<->r with c2 on atom k only.
/// Frequencies are stored already scaled by the convention.
class Model {
public:
    Model(SystemSpec system, PulseSpec pulse, ModelOptions options = {});

    const CollectiveBasis& basis() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    int n_atoms() const noexcept { return basis_.n_atoms(); }
    const ModelOptions& options() const noexcept { return options_; }

    /// Specs as supplied (quoted units).
    const SystemSpec& system() const noexcept { return system_; }
    const PulseSpec& pulse() const noexcept { return pulse_; }
    /// Specs after convention scaling.
    const SystemSpec& scaled_system() const noexcept { return scaled_system_; }
    const PulseSpec& scaled_pulse() const noexcept { return scaled_pulse_; }

    void diagonal(double t, double* out) const;
    /// Off-diagonal weights (c1, c2) at time t, including the coupling weight.
    std::pair<double, double> couplings(double t) const;

    Eigen::MatrixXcd dense(double t) const;
    Eigen::MatrixXd dense_real(double t) const;

    const std::vector<double>& excited_counts() const noexcept { return n_e_; }
    const std::vector<double>& rydberg_counts() const noexcept { return n_r_; }
    const std::vector<double>& shifts() const noexcept { return shift_; }

private:
    SystemSpec system_;
    PulseSpec pulse_;
    ModelOptions options_;
    SystemSpec scaled_system_;
    PulseSpec scaled_pulse_;
    CollectiveBasis basis_;
    std::vector<double> n_e_;
    std::vector<double> n_r_;
    std::vector<double> shift_;
};

} // namespace ryd
