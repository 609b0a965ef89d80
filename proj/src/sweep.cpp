#include "ryd/sweep.hpp"

#include "ryd/analysis.hpp"
#include "ryd/errors.hpp"
#include "ryd/observe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace ryd {

std::string to_string(Protocol p) {
    return p == Protocol::ghz ? "ghz" : "w";
}

Protocol parse_protocol(const std::string& s) {
    if (s == "ghz") return Protocol::ghz;
    if (s == "w") return Protocol::w;
    throw ParameterError("unknown protocol \"" + s + "\" (expected ghz|w)");
}

std::vector<double> AxisRange::values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        v[static_cast<std::size_t>(i)] =
            i == steps - 1 ? max : min + (max - min) * static_cast<double>(i) / (steps - 1);
    }
    return v;
}

void SweepGrid::validate() const {
    for (const AxisRange* r : {&alpha, &omega}) {
        if (r->steps < 2) throw ParameterError("sweep: each axis needs at least 2 steps");
        if (!std::isfinite(r->min) || !std::isfinite(r->max)) {
            throw ParameterError("sweep: axis range must be finite");
        }
    }
    system.validate();
    pulse.validate();
    if (system.n_atoms < 2) throw EntanglementUndefinedError("sweep: needs at least two atoms");
}

std::size_t SweepResult::failure_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.failed; }));
}

PulseSpec cell_pulse(const SweepGrid& grid, const IntegratorConfig& cfg, double alpha, double omega) {
    PulseSpec p = grid.pulse;
    p.alpha1 = p.alpha2 = alpha;
    p.omega01 = p.omega02 = omega;
    if (grid.protocol == Protocol::w) {
        p.chirp_off_time.reset();
    } else if (alpha == 0.0) {
        p.chirp_off_time.reset();
    } else {
        const TimeWindow w = resolve_window(cfg, p);
        p.chirp_off_time = std::clamp(resonance_time(grid.system, p), w.start, w.end);
    }
    return p;
}

SweepCell run_cell(const SweepGrid& grid, const IntegratorConfig& cfg, double alpha, double omega) {
    SweepCell cell;
    cell.alpha = alpha;
    cell.omega = omega;
    try {
        const Model model(grid.system, cell_pulse(grid, cfg, alpha, omega), grid.options);
        const Trajectory tr = evolve(model, cfg, ground_state(model.basis()));
        const StateVector& psi = tr.final_state;
        const CollectiveBasis& basis = model.basis();
        const int n = basis.n_atoms();
        for (std::size_t i : single_ground_indices(basis)) {
            cell.single_g.push_back(std::norm(psi.amplitudes(static_cast<Eigen::Index>(i))));
        }
        if (grid.protocol == Protocol::ghz) {
            cell.fidelity = ghz_fidelity(psi);
            cell.pop_metric = population_difference(psi, BasisState::uniform(n, Level::g),
                                                    BasisState::uniform(n, Level::r));
        } else {
            cell.fidelity = w_fidelity(psi);
            cell.pop_metric = w_population_sum(psi);
        }
        cell.norm = psi.norm();
    } catch (const IntegrationError& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell.fidelity = cell.pop_metric = cell.norm = nan;
        cell.single_g.assign(static_cast<std::size_t>(grid.system.n_atoms), nan);
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

SweepResult run_sweep(const SweepGrid& grid, const IntegratorConfig& cfg, int workers) {
    grid.validate();
    cfg.validate();
    SweepResult result;
    result.alphas = grid.alpha.values();
    result.omegas = grid.omega.values();
    result.protocol = grid.protocol;
    result.options = grid.options;
    result.integrator = cfg;
    const std::size_t n_omega = result.omegas.size();
    const std::size_t total = result.alphas.size() * n_omega;
    result.cells.resize(total);

    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                result.cells[i] =
                    run_cell(grid, cfg, result.alphas[i / n_omega], result.omegas[i % n_omega]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop = true;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

namespace {

double spread(const SweepCell& c) {
    if (c.failed || c.single_g.empty()) return std::numeric_limits<double>::quiet_NaN();
    const auto [lo, hi] = std::minmax_element(c.single_g.begin(), c.single_g.end());
    return *hi - *lo;
}

} // namespace

Contour equal_population_contour(const SweepResult& result, double threshold) {
    if (result.protocol != Protocol::w) {
        throw ParameterError("equal_population_contour: only defined for W-protocol sweeps");
    }
    const std::size_t na = result.alphas.size();
    const std::size_t no = result.omegas.size();
    auto f = [&](std::size_t ia, std::size_t io) { return spread(result.cell(ia, io)) - threshold; };

    // Edge ids: 2*(ia*no + io) runs along alpha, +1 runs along omega.
    auto edge_point = [&](std::size_t id) {
        const std::size_t base = id / 2;
        const std::size_t ia = base / no;
        const std::size_t io = base % no;
        const bool along_alpha = id % 2 == 0;
        const std::size_t ja = along_alpha ? ia + 1 : ia;
        const std::size_t jo = along_alpha ? io : io + 1;
        const double a = f(ia, io);
        const double b = f(ja, jo);
        const double s = a == b ? 0.5 : a / (a - b);
        return std::make_pair(result.alphas[ia] + s * (result.alphas[ja] - result.alphas[ia]),
                              result.omegas[io] + s * (result.omegas[jo] - result.omegas[io]));
    };

    Contour out;
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    for (std::size_t ia = 0; ia + 1 < na; ++ia) {
        for (std::size_t io = 0; io + 1 < no; ++io) {
            // corners counter-clockwise from (ia, io); edges bottom, right, top, left
            const double v[4] = {f(ia, io), f(ia + 1, io), f(ia + 1, io + 1), f(ia, io + 1)};
            if (std::any_of(std::begin(v), std::end(v), [](double x) { return std::isnan(x); })) {
                continue;
            }
            const std::size_t e[4] = {2 * (ia * no + io), 2 * ((ia + 1) * no + io) + 1,
                                      2 * (ia * no + io + 1), 2 * (ia * no + io) + 1};
            int code = 0;
            for (int k = 0; k < 4; ++k) code |= (v[k] > 0.0 ? 1 : 0) << k;
            if (code == 0 || code == 15) continue;
            std::vector<int> crossed;
            for (int k = 0; k < 4; ++k) {
                const bool a = (code >> k) & 1;
                const bool b = (code >> ((k + 1) % 4)) & 1;
                if (a != b) crossed.push_back(k);
            }
            // Edge k joins corner k and corner k+1.
            if (crossed.size() == 2) {
                segments.emplace_back(e[crossed[0]], e[crossed[1]]);
            } else {
                // Saddle: decide by the centre value which corners connect.
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                const bool centre_high = centre > 0.0;
                const bool c0_high = code & 1;
                if (centre_high == c0_high) {
                    segments.emplace_back(e[0], e[1]);
                    segments.emplace_back(e[2], e[3]);
                } else {
                    segments.emplace_back(e[3], e[0]);
                    segments.emplace_back(e[1], e[2]);
                }
            }
            out.squares.push_back({ia, io});
        }
    }

    // Chain segments that share an edge into polylines.
    std::multimap<std::size_t, std::size_t> by_edge;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        by_edge.emplace(segments[i].first, i);
        by_edge.emplace(segments[i].second, i);
    }
    std::vector<bool> used(segments.size(), false);
    auto take_next = [&](std::size_t edge) -> std::ptrdiff_t {
        auto [lo, hi] = by_edge.equal_range(edge);
        for (auto it = lo; it != hi; ++it) {
            if (!used[it->second]) return static_cast<std::ptrdiff_t>(it->second);
        }
        return -1;
    };
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<std::size_t> chain{segments[s].first, segments[s].second};
        for (bool forward : {true, false}) {
            for (;;) {
                const std::size_t end = forward ? chain.back() : chain.front();
                const std::ptrdiff_t n = take_next(end);
                if (n < 0) break;
                used[static_cast<std::size_t>(n)] = true;
                const auto& seg = segments[static_cast<std::size_t>(n)];
                const std::size_t other = seg.first == end ? seg.second : seg.first;
                if (forward) {
                    chain.push_back(other);
                } else {
                    chain.insert(chain.begin(), other);
                }
            }
        }
        std::vector<std::pair<double, double>> line;
        line.reserve(chain.size());
        for (std::size_t id : chain) line.push_back(edge_point(id));
        out.lines.push_back(std::move(line));
    }
    return out;
}

} // namespace ryd
