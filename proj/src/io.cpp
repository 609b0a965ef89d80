#include "ryd/io.hpp"

#include "ryd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ryd {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);   // no "-0"
    return buf;
}

namespace {

std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);
    return buf;
}

json meta_json(const OutputMeta& meta) {
    return {{"config_hash", meta.config_hash}, {"angular_convention", to_string(meta.convention)}};
}

} // namespace

std::string trajectory_csv(const Trajectory& tr, const CollectiveBasis& basis,
                           const std::vector<Column>& extra) {
    for (const auto& [name, values] : extra) {
        if (values.size() != tr.times.size()) {
            throw std::invalid_argument("trajectory_csv: column " + name + " has the wrong length");
        }
    }
    std::string out = "t";
    for (std::size_t i = 0; i < basis.size(); ++i) out += "," + basis.label(i);
    for (const auto& c : extra) out += "," + c.first;
    out += '\n';
    for (std::size_t row = 0; row < tr.times.size(); ++row) {
        out += format_number(tr.times[row]);
        for (Eigen::Index i = 0; i < tr.amplitudes.cols(); ++i) {
            out += ',';
            out += format_number(std::norm(tr.amplitudes(static_cast<Eigen::Index>(row), i)));
        }
        for (const auto& c : extra) {
            out += ',';
            out += format_number(c.second[row]);
        }
        out += '\n';
    }
    return out;
}

std::string spectrum_csv(const SpectrumTrace& trace) {
    std::string out = "t";
    for (const auto& n : trace.names) out += ",E_" + n;
    out += '\n';
    for (std::size_t row = 0; row < trace.times.size(); ++row) {
        out += format_number(trace.times[row]);
        for (Eigen::Index c = 0; c < trace.energies.cols(); ++c) {
            out += ',';
            out += format_number(trace.energies(static_cast<Eigen::Index>(row), c));
        }
        out += '\n';
    }
    return out;
}

json spectrum_sidecar(const SpectrumTrace& trace, const CollectiveBasis& basis,
                      const OutputMeta& meta) {
    json classes = json::array();
    for (std::size_t c = 0; c < trace.classes.size(); ++c) {
        json members = json::array();
        for (std::size_t i : trace.classes[c].members) members.push_back(basis.label(i));
        classes.push_back({{"column", "E_" + trace.names[c]},
                           {"representative", trace.classes[c].representative.label()},
                           {"degeneracy", trace.classes[c].degeneracy()},
                           {"members", members}});
    }
    json j = meta_json(meta);
    j["classes"] = classes;
    j["unique_energies"] = trace.classes.size();
    return j;
}

json crossing_json(const std::vector<Crossing>& crossings, const OutputMeta& meta) {
    json list = json::array();
    for (const auto& c : crossings) {
        list.push_back({{"state", c.state}, {"time", c.time}, {"degeneracy", c.degeneracy}});
    }
    json j = meta_json(meta);
    j["crossings"] = list;
    return j;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "alpha,omega,fidelity,pop_diff_or_sum,norm\n";
    for (const auto& c : result.cells) {
        out += format_number(c.alpha) + ',' + format_number(c.omega) + ',' +
               format_number(c.fidelity) + ',' + format_number(c.pop_metric) + ',' +
               format_number(c.norm) + '\n';
    }
    return out;
}

json sweep_metadata(const SweepResult& result, const OutputMeta& meta) {
    json j = meta_json(meta);
    const TimeWindow w = result.integrator.window.value_or(TimeWindow{0.0, 0.0});
    j["protocol"] = to_string(result.protocol);
    j["coupling"] = to_string(result.options.coupling);
    j["dt"] = result.integrator.dt;
    j["stepper"] = to_string(result.integrator.stepper);
    if (result.integrator.window) {
        j["window"] = {w.start, w.end};
    } else {
        j["window"] = "pulse default";
    }
    j["alpha"] = {{"min", result.alphas.front()}, {"max", result.alphas.back()},
                  {"steps", result.alphas.size()}};
    j["omega"] = {{"min", result.omegas.front()}, {"max", result.omegas.back()},
                  {"steps", result.omegas.size()}};
    j["pop_diff_or_sum"] = result.protocol == Protocol::ghz ? "P_g..g - P_r..r" : "sum of single-g populations";
    j["cells"] = result.cells.size();
    j["failed_cells"] = result.failure_count();
    return j;
}

json failure_manifest(const SweepResult& result) {
    json list = json::array();
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& c = result.cells[i];
        if (!c.failed) continue;
        list.push_back({{"index", i}, {"alpha", c.alpha}, {"omega", c.omega}, {"error", c.error}});
    }
    return {{"failed", list}};
}

namespace {

// Linear ramp through fixed stops, t in [0, 1].
std::string ramp(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {{68, 1, 84}},
        {{59, 82, 139}},
        {{33, 145, 140}},
        {{94, 201, 98}},
        {{253, 231, 37}},
    }};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double u = t - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int k = 0; k < 3; ++k) {
        rgb[k] = static_cast<int>(std::lround(stops[i][static_cast<std::size_t>(k)] * (1 - u) +
                                              stops[i + 1][static_cast<std::size_t>(k)] * u));
    }
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

} // namespace

std::string heatmap_svg(const SweepResult& result, const std::string& field, const Contour* contour,
                        const OutputMeta& meta) {
    if (field != "fidelity" && field != "pop_metric") {
        throw std::invalid_argument("heatmap_svg: unknown field " + field);
    }
    const bool fid = field == "fidelity";
    double lo = 0.0;
    double hi = 1.0;
    std::string label = fid ? "fidelity" : "sum of single-g populations";
    if (!fid && result.protocol == Protocol::ghz) {
        lo = -1.0;
        label = "P_ggg - P_rrr";
    }
    const std::size_t na = result.alphas.size();
    const std::size_t no = result.omegas.size();
    const double left = 70, top = 20, plot = 480, bar_w = 18, gap = 20;
    const double cw = plot / static_cast<double>(na);
    const double ch = plot / static_cast<double>(no);
    const double width = left + plot + gap + bar_w + 60;
    const double height = top + plot + 60;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << short_number(width) << "\" height=\""
      << short_number(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<metadata>config_hash=" << meta.config_hash << " angular_convention="
      << to_string(meta.convention) << " protocol=" << to_string(result.protocol)
      << " field=" << field << "</metadata>\n";
    s << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t ia = 0; ia < na; ++ia) {
        for (std::size_t io = 0; io < no; ++io) {
            const SweepCell& c = result.cell(ia, io);
            const double v = fid ? c.fidelity : c.pop_metric;
            const std::string colour = std::isfinite(v) ? ramp((v - lo) / (hi - lo)) : "#808080";
            s << "<rect x=\"" << short_number(left + ia * cw) << "\" y=\""
              << short_number(top + plot - (io + 1) * ch) << "\" width=\"" << short_number(cw)
              << "\" height=\"" << short_number(ch) << "\" fill=\"" << colour << "\"/>\n";
        }
    }
    s << "</g>\n";

    // Grid nodes sit at cell centres.
    auto px = [&](double a) {
        const double span = result.alphas.back() - result.alphas.front();
        return left + 0.5 * cw + (a - result.alphas.front()) / span * (na - 1) * cw;
    };
    auto py = [&](double o) {
        const double span = result.omegas.back() - result.omegas.front();
        return top + plot - 0.5 * ch - (o - result.omegas.front()) / span * (no - 1) * ch;
    };
    if (contour) {
        for (const auto& line : contour->lines) {
            s << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < line.size(); ++k) {
                s << (k ? " " : "") << short_number(px(line[k].first)) << ','
                  << short_number(py(line[k].second));
            }
            s << "\"/>\n";
        }
    }

    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot << "\" height=\"" << plot
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double a = result.alphas.front() + (result.alphas.back() - result.alphas.front()) * k / 4;
        const double o = result.omegas.front() + (result.omegas.back() - result.omegas.front()) * k / 4;
        s << "<text x=\"" << short_number(px(a)) << "\" y=\"" << short_number(top + plot + 16)
          << "\" text-anchor=\"middle\">" << short_number(a) << "</text>\n";
        s << "<text x=\"" << short_number(left - 6) << "\" y=\"" << short_number(py(o) + 4)
          << "\" text-anchor=\"end\">" << short_number(o) << "</text>\n";
    }
    s << "<text x=\"" << short_number(left + plot / 2) << "\" y=\"" << short_number(top + plot + 40)
      << "\" text-anchor=\"middle\">chirp rate alpha (MHz/us)</text>\n";
    s << "<text transform=\"translate(18," << short_number(top + plot / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">peak Rabi frequency Omega0 (MHz)</text>\n";

    const double bx = left + plot + gap;
    const int bands = 50;
    for (int k = 0; k < bands; ++k) {
        const double t = (k + 0.5) / bands;
        s << "<rect x=\"" << short_number(bx) << "\" y=\""
          << short_number(top + plot - (k + 1) * plot / bands) << "\" width=\"" << bar_w
          << "\" height=\"" << short_number(plot / bands + 0.5) << "\" fill=\"" << ramp(t)
          << "\"/>\n";
    }
    s << "<text x=\"" << short_number(bx + bar_w + 4) << "\" y=\"" << short_number(top + plot)
      << "\">" << short_number(lo) << "</text>\n";
    s << "<text x=\"" << short_number(bx + bar_w + 4) << "\" y=\"" << short_number(top + 10)
      << "\">" << short_number(hi) << "</text>\n";
    s << "<text x=\"" << short_number(left + plot / 2) << "\" y=\"" << short_number(top - 6)
      << "\" text-anchor=\"middle\">" << label << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

} // namespace ryd
