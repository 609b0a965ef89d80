// io.hpp — CSV, JSON and SVG emitters. All numbers are written with nine
// significant digits so identical inputs give byte-identical files.

#pragma once

#include "ryd/analysis.hpp"
#include "ryd/basis.hpp"
#include "ryd/propagate.hpp"
#include "ryd/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ryd {

/// Stamped into every sidecar and SVG.
struct OutputMeta {
    std::string config_hash;
    Convention convention{Convention::direct};
};

std::string format_number(double x);

using Column = std::pair<std::string, std::vector<double>>;

/// Header `t,<label>,...` with populations, followed by any extra columns
/// (one value per sample).
std::string trajectory_csv(const Trajectory& tr, const CollectiveBasis& basis,
                           const std::vector<Column>& extra = {});

/// Header `t,E_<class name>,...`.
std::string spectrum_csv(const SpectrumTrace& trace);
nlohmann::json spectrum_sidecar(const SpectrumTrace& trace, const CollectiveBasis& basis,
                                const OutputMeta& meta);
nlohmann::json crossing_json(const std::vector<Crossing>& crossings, const OutputMeta& meta);

/// Long format `alpha,omega,fidelity,pop_diff_or_sum,norm`, alpha outer.
/// Failed cells are written as nan.
std::string sweep_csv(const SweepResult& result);
nlohmann::json sweep_metadata(const SweepResult& result, const OutputMeta& meta);
nlohmann::json failure_manifest(const SweepResult& result);

/// Heat map of one field ("fidelity" or "pop_metric") on a linear colour
/// ramp over the field's natural range, with optional contour overlay.
std::string heatmap_svg(const SweepResult& result, const std::string& field, const Contour* contour,
                        const OutputMeta& meta);

void write_file(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace ryd
