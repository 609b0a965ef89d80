// sweep.hpp — (chirp rate, peak Rabi frequency) landscapes.
//
// Each cell sets alpha1 = alpha2 = alpha and omega01 = omega02 = omega on
// the base pulse, propagates |g...g> over the window and records the target
// fidelity. Cells are independent; results are stored in grid order no
// matter which worker computed them.

#pragma once

#include "ryd/model.hpp"
#include "ryd/propagate.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace ryd {

enum class Protocol {
    ghz,   ///< chirp turned off at the per-cell resonance time
    w,     ///< constant chirp
};

std::string to_string(Protocol p);
Protocol parse_protocol(const std::string& s);

struct AxisRange {
    double min{0.0};
    double max{0.0};
    int steps{2};

    /// steps points from min to max inclusive.
    std::vector<double> values() const;
};

struct SweepGrid {
    AxisRange alpha;
    AxisRange omega;
    SystemSpec system;
    PulseSpec pulse;
    Protocol protocol{Protocol::ghz};
    ModelOptions options;

    void validate() const;
};

struct SweepCell {
    double alpha{0.0};
    double omega{0.0};
    double fidelity{0.0};
    /// P_g..g - P_r..r for GHZ, sum of single-g populations for W.
    double pop_metric{0.0};
    double norm{0.0};
    /// Populations of the N single-g states (grr.., rgr.., ...).
    std::vector<double> single_g;
    bool failed{false};
    std::string error;
};

struct SweepResult {
    std::vector<double> alphas;
    std::vector<double> omegas;
    Protocol protocol{Protocol::ghz};
    ModelOptions options;
    IntegratorConfig integrator;
    /// Row-major, alpha outer: cells[ia * omegas.size() + io].
    std::vector<SweepCell> cells;

    const SweepCell& cell(std::size_t ia, std::size_t io) const {
        return cells.at(ia * omegas.size() + io);
    }
    std::size_t failure_count() const;
};

/// Pulse used for one cell. For GHZ the chirp-off time is the analytic
/// resonance time, clamped to the window; with no chirp there is nothing to
/// turn off.
PulseSpec cell_pulse(const SweepGrid& grid, const IntegratorConfig& cfg, double alpha, double omega);

/// One cell computed standalone; never throws for numerical failures.
SweepCell run_cell(const SweepGrid& grid, const IntegratorConfig& cfg, double alpha, double omega);

/// workers <= 0 uses the hardware concurrency.
SweepResult run_sweep(const SweepGrid& grid, const IntegratorConfig& cfg, int workers = 0);

struct Contour {
    /// Polylines in (alpha, omega) coordinates.
    std::vector<std::vector<std::pair<double, double>>> lines;
    /// Lower-left (ia, io) of each grid square the contour passes through.
    std::vector<std::array<std::size_t, 2>> squares;
};

/// Marching-squares level set where the largest pairwise difference among
/// the single-g populations equals the threshold. W protocol only; throws
/// ParameterError otherwise. Squares with a failed corner are skipped.
Contour equal_population_contour(const SweepResult& result, double threshold = 0.01);

} // namespace ryd
