// config.hpp — JSON run configuration.
//
// Unknown keys are rejected at every level. The config hash is FNV-1a (64
// bit) over the compact dump of the effective JSON (after command-line
// overrides), so identical effective configs hash identically.

#pragma once

#include "ryd/model.hpp"
#include "ryd/observe.hpp"
#include "ryd/propagate.hpp"
#include "ryd/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace ryd {

struct SpectrumConfig {
    /// Defaults to the integrator window.
    std::optional<TimeWindow> window;
    int samples{600};
};

struct SweepConfig {
    AxisRange alpha;
    AxisRange omega;
    int workers{0};
    bool svg{false};
    /// Field drawn in the heat map: "fidelity" or "pop_metric".
    std::string svg_field{"fidelity"};
};

struct RunConfig {
    std::string description;
    SystemSpec system;
    PulseSpec pulse;
    ModelOptions options;
    IntegratorConfig integrator;
    Protocol protocol{Protocol::ghz};
    WPrefactor w_prefactor{WPrefactor::normalized};
    bool effective_overlay{false};
    /// Unset means calibrate against the full run.
    std::optional<double> effective_prefactor;
    SpectrumConfig spectrum;
    std::optional<SweepConfig> sweep;
    std::filesystem::path out_dir{"out"};
    std::string prefix{"run"};

    /// Effective JSON the config was parsed from, and its hash.
    nlohmann::json source;
    std::string hash;

    SweepGrid sweep_grid() const;
};

struct Overrides {
    std::optional<std::string> convention;
    std::optional<double> dt;
    std::optional<int> workers;
    std::optional<bool> svg;
    std::optional<std::string> out_dir;
};

/// Throws ConfigError with a path-qualified message on any schema problem
/// or parameter invariant violation.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
void apply_overrides(nlohmann::json& j, const Overrides& overrides);

std::string fnv1a_hex(const std::string& data);

} // namespace ryd
