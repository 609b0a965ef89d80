// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--recipes DIR] [--known-red 1,7,...] [--skip-sweeps] [--report FILE]
//
// --report also writes the lines to FILE (ctest hides output of passing tests).
// Exit status is nonzero if any criterion fails that is not listed in
// --known-red. Listed criteria still print FAIL (marked "known") so the
// report stays honest; a listed criterion that passes prints PASS.

#include "ryd/analysis.hpp"
#include "ryd/config.hpp"
#include "ryd/errors.hpp"
#include "ryd/io.hpp"
#include "ryd/observe.hpp"
#include "ryd/propagate.hpp"
#include "ryd/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace ryd;

namespace {

std::filesystem::path recipes = RYD_RECIPE_DIR;
std::set<int> known_red;
bool skip_sweeps = false;
int unexpected_failures = 0;
std::ofstream report_file;

void say(const std::string& line) {
    std::cout << line << std::endl;
    if (report_file) report_file << line << std::endl;
}

std::string num(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    const bool known = known_red.count(id) > 0;
    if (!pass && !known) ++unexpected_failures;
    say(std::string(pass ? "PASS" : known ? "FAIL (known)" : "FAIL") + "  criterion " +
        std::to_string(id) + " [" + title + "]: " + detail);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig recipe(const std::string& name, std::optional<std::string> convention = std::nullopt) {
    Overrides o;
    o.convention = std::move(convention);
    return load_config(recipes / (name + ".json"), o);
}

struct PointRun {
    RunConfig cfg;
    Trajectory tr;
    double seconds;
};

// The recipe step first; if the explicit stepper goes unstable (two_pi
// scales every eigenvalue by 2 pi), halve it a few times before giving up.
PointRun run_point(const std::string& name, const std::string& convention) {
    PointRun r{recipe(name, convention), {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const Model m(r.cfg.system, r.cfg.pulse, r.cfg.options);
    IntegratorConfig ic = r.cfg.integrator;
    for (int halving = 0;; ++halving) {
        try {
            r.tr = evolve(m, ic, ground_state(m.basis()));
            break;
        } catch (const IntegrationError&) {
            if (halving == 4) throw;
            ic.dt *= 0.5;
        }
    }
    r.seconds = seconds_since(t0);
    return r;
}

double pop(const StateVector& s, const char* label) {
    return population(s, BasisState::parse(label));
}

// ---------------------------------------------------------------------------

struct GhzOutcome {
    bool pass;
    std::string detail;
};

GhzOutcome ghz_point(const std::string& convention) {
    try {
        const PointRun r = run_point("evolve_ghz", convention);
        const StateVector& s = r.tr.final_state;
        const double pg = pop(s, "ggg");
        const double pr = pop(s, "rrr");
        const double f = ghz_fidelity(s);
        const bool pass = std::abs(pg - 0.5) <= 0.05 && std::abs(pr - 0.5) <= 0.05 && f >= 0.98;
        return {pass, convention + ": P_ggg=" + num(pg) + " P_rrr=" + num(pr) + " F_GHZ=" + num(f) +
                          " (dt=" + num(r.tr.dt) + ", " + num(r.seconds, 3) + " s)"};
    } catch (const IntegrationError& e) {
        return {false, convention + ": integration failed (" + e.what() + ")"};
    }
}

std::string criterion1() {
    const GhzOutcome direct = ghz_point("direct");
    if (direct.pass) {
        report(1, "GHZ point", true, direct.detail);
        return "direct";
    }
    const GhzOutcome two_pi = ghz_point("two_pi");
    report(1, "GHZ point", two_pi.pass, direct.detail + "; " + two_pi.detail);
    // With neither convention passing, the remaining criteria use the default.
    return two_pi.pass ? "two_pi" : "direct";
}

int local_maxima(const Eigen::VectorXd& p, double floor) {
    int n = 0;
    for (Eigen::Index i = 1; i + 1 < p.size(); ++i) {
        if (p(i) > p(i - 1) && p(i) >= p(i + 1) && p(i) >= floor) ++n;
    }
    return n;
}

void criterion2(const std::string& conv) {
    try {
        const PointRun r = run_point("evolve_w", conv);
        const StateVector& s = r.tr.final_state;
        const double f = w_fidelity(s);
        const double a = pop(s, "grr"), b = pop(s, "rgr"), c = pop(s, "rrg");
        const auto basis = enumerate_basis(3);
        const Eigen::VectorXd rgr = r.tr.populations().col(static_cast<Eigen::Index>(basis.index("rgr")));
        const int peaks = local_maxima(rgr, 1e-3);
        const bool pops = std::abs(a - 1.0 / 3) <= 0.05 && std::abs(b - 1.0 / 3) <= 0.05 &&
                          std::abs(c - 1.0 / 3) <= 0.05;
        report(2, "W point", f >= 0.99 && pops && peaks >= 3,
               conv + ": F_W=" + num(f) + " P_grr=" + num(a) + " P_rgr=" + num(b) + " P_rrg=" + num(c) +
                   " local maxima of P_rgr(t)=" + std::to_string(peaks));
    } catch (const IntegrationError& e) {
        report(2, "W point", false, std::string("integration failed: ") + e.what());
    }
}

void criterion3() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double v = 5.0 + 200.0 * u(rng);
        const double v31 = v * (0.01 + 0.99 * u(rng));
        SystemSpec s{3, chain_interactions(3, v, v31), -(500.0 + 2000.0 * u(rng)), 0.0};
        s.delta2 = -2.0 * s.pair_sum() / 3.0;
        PulseSpec p;
        p.t_center = 1.0 + 5.0 * u(rng);
        p.tau0 = 0.5 + u(rng);
        p.alpha1 = -(1.0 + 500.0 * u(rng));
        p.alpha2 = -(1.0 + 500.0 * u(rng));
        worst = std::max(worst, std::abs(resonance_time(s, p) - p.t_center) / p.t_center);
    }
    report(3, "resonance at the peak", worst <= 4 * std::numeric_limits<double>::epsilon(),
           "200 draws, max |t_res - t_c| / t_c = " + num(worst));
}

void criterion4() {
    const auto classes = energy_classes(enumerate_basis(3), chain_interactions(3, 60, 30));
    std::string degs;
    std::vector<int> got;
    for (const auto& c : classes) {
        got.push_back(c.degeneracy());
        degs += (degs.empty() ? "" : ",") + std::to_string(c.degeneracy());
    }
    const std::vector<int> expect{1, 3, 3, 1, 3, 6, 3, 2, 1, 2, 1, 1};
    report(4, "energy classes", got == expect,
           std::to_string(classes.size()) + " classes, degeneracies (" + degs + ")");
}

void criterion5(const std::string& conv) {
    std::string detail;
    bool pass = true;
    for (const char* name : {"evolve_ghz", "evolve_w"}) {
        const RunConfig cfg = recipe(name, conv);
        IntegratorConfig ic = cfg.integrator;
        ic.dt = 1e-4;
        const Model m(cfg.system, cfg.pulse, cfg.options);
        try {
            const Trajectory tr = evolve(m, ic, ground_state(m.basis()));
            const Trajectory ref = oracle_evolve(m, ic, ground_state(m.basis()));
            const double d = (tr.final_state.amplitudes - ref.final_state.amplitudes).norm();
            pass = pass && d <= 1e-5 && tr.max_norm_drift <= 1e-6;
            detail += std::string(detail.empty() ? "" : "; ") + name + ": |psi - psi_oracle|=" + num(d) +
                      " drift=" + num(tr.max_norm_drift) + " (" + to_string(ic.stepper) + ")";
        } catch (const IntegrationError& e) {
            pass = false;
            detail += std::string(detail.empty() ? "" : "; ") + name + ": " + e.what();
        }
    }
    report(5, "oracle equivalence", pass, detail);
}

void criterion6(const std::string& conv) {
    const RunConfig cfg = recipe("evolve_ghz", conv);
    const Model m(cfg.system, cfg.pulse, cfg.options);
    std::string detail;
    bool pass = true;
    try {
        const Trajectory full = evolve(m, cfg.integrator, ground_state(m.basis()));
        const EffectiveTwoLevel eff{cfg.system, cfg.pulse, 1.0, cfg.options.convention};
        const Calibration cal = calibrate_prefactor(eff, cfg.integrator, full);
        pass = cal.max_deviation <= 0.1;
        detail = "c=" + num(cal.prefactor) + " max|dP_ggg|=" + num(cal.max_deviation);
    } catch (const IntegrationError& e) {
        pass = false;
        detail = e.what();
    }
    const EffectiveTwoLevel eff{cfg.system, cfg.pulse, 1.0, cfg.options.convention};
    const TimeWindow w = resolve_window(cfg.integrator, cfg.pulse);
    std::vector<double> times;
    for (int k = 0; k <= 1000; ++k) times.push_back(w.start + (w.end - w.start) * k / 1000.0);
    times.push_back(cfg.pulse.t_center);
    const DressedAngles da = dressed_angles(eff, times);
    double ident = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (da.undefined[i]) continue;
        ident = std::max(ident, std::abs(da.cos_theta[i] * da.cos_theta[i] +
                                         da.sin_theta[i] * da.sin_theta[i] - 1.0));
    }
    const double c_tc = da.cos_theta.back();
    const double s_tc = da.sin_theta.back();
    const double half = 1.0 / std::numbers::sqrt2;
    const bool angles = ident <= 1e-12 && std::abs(c_tc - half) <= 1e-12 && std::abs(s_tc - half) <= 1e-12;
    report(6, "effective model", pass && angles,
           detail + "; max|cos^2+sin^2-1|=" + num(ident) + " cos(t_c)=" + num(c_tc, 15) +
               " sin(t_c)=" + num(s_tc, 15));
}

void criterion7(const std::string& conv) {
    RunConfig cfg = recipe("evolve_ghz", conv);
    cfg.pulse.chirp_off_time.reset();
    const Model m(cfg.system, cfg.pulse, cfg.options);
    try {
        const Trajectory tr = evolve(m, cfg.integrator, ground_state(m.basis()));
        const double pr = pop(tr.final_state, "rrr");
        report(7, "full transfer", pr >= 0.95,
               conv + ": P_rrr=" + num(pr) + " P_ggg=" + num(pop(tr.final_state, "ggg")));
    } catch (const IntegrationError& e) {
        report(7, "full transfer", false, e.what());
    }
}

// 4-connected region of cells with fidelity >= level containing the seed.
std::vector<std::size_t> region(const SweepResult& r, std::size_t seed, double level) {
    const std::size_t no = r.omegas.size();
    const std::size_t na = r.alphas.size();
    std::vector<bool> seen(r.cells.size(), false);
    std::vector<std::size_t> out;
    auto ok = [&](std::size_t i) { return !r.cells[i].failed && r.cells[i].fidelity >= level; };
    if (!ok(seed)) return out;
    std::queue<std::size_t> q;
    q.push(seed);
    seen[seed] = true;
    while (!q.empty()) {
        const std::size_t i = q.front();
        q.pop();
        out.push_back(i);
        const std::size_t ia = i / no, io = i % no;
        std::vector<std::size_t> nb;
        if (ia > 0) nb.push_back(i - no);
        if (ia + 1 < na) nb.push_back(i + no);
        if (io > 0) nb.push_back(i - 1);
        if (io + 1 < no) nb.push_back(i + 1);
        for (std::size_t j : nb) {
            if (!seen[j] && ok(j)) {
                seen[j] = true;
                q.push(j);
            }
        }
    }
    return out;
}

std::size_t nearest(const std::vector<double>& axis, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (std::abs(axis[i] - x) < std::abs(axis[best] - x)) best = i;
    }
    return best;
}

SweepResult recipe_sweep(const std::string& name, const std::string& conv, double& seconds) {
    const RunConfig cfg = recipe(name, conv);
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult r = run_sweep(cfg.sweep_grid(), cfg.integrator, cfg.sweep->workers);
    seconds = seconds_since(t0);
    return r;
}

void criterion8(const std::string& conv) {
    if (skip_sweeps) {
        report(8, "sweep reproduction", false, "skipped (--skip-sweeps)");
        return;
    }
    double t_ghz = 0.0, t_w = 0.0;
    const SweepResult g = recipe_sweep("sweep_ghz_fidelity", conv, t_ghz);
    const RunConfig point = recipe("evolve_ghz", conv);
    const std::size_t ia = nearest(g.alphas, point.pulse.alpha1);
    const std::size_t io = nearest(g.omegas, point.pulse.omega01);
    const std::size_t seed = ia * g.omegas.size() + io;
    const auto reg = region(g, seed, 0.995);
    double worst_diff = 0.0;
    for (std::size_t i : reg) worst_diff = std::max(worst_diff, std::abs(g.cells[i].pop_metric));
    double best = 0.0;
    for (const auto& c : g.cells) {
        if (!c.failed) best = std::max(best, c.fidelity);
    }
    const bool ghz_ok = !reg.empty() && worst_diff <= 0.05;
    std::string detail = "GHZ: cell (alpha=" + num(g.alphas[ia]) + ", omega=" + num(g.omegas[io]) +
                         ") F=" + num(g.cells[seed].fidelity) + ", region F>=0.995 has " +
                         std::to_string(reg.size()) + " cells" +
                         (reg.empty() ? "" : ", max|P_ggg-P_rrr| there=" + num(worst_diff)) +
                         ", grid max F=" + num(best) + ", " + std::to_string(g.failure_count()) +
                         " failed cells, " + num(t_ghz, 4) + " s";

    const SweepResult w = recipe_sweep("sweep_w_fidelity", conv, t_w);
    const Contour k = equal_population_contour(w);
    double best_on = 0.0;
    for (const auto& sq : k.squares) {
        for (std::size_t da : {0u, 1u}) {
            for (std::size_t dq : {0u, 1u}) {
                const auto& c = w.cell(sq[0] + da, sq[1] + dq);
                if (!c.failed) best_on = std::max(best_on, c.fidelity);
            }
        }
    }
    double best_w = 0.0;
    for (const auto& c : w.cells) {
        if (!c.failed) best_w = std::max(best_w, c.fidelity);
    }
    const bool w_ok = best_on >= 0.99;
    detail += "; W: contour crosses " + std::to_string(k.squares.size()) +
              " squares, max F on them=" + num(best_on) + ", grid max F=" + num(best_w) + ", " +
              num(t_w, 4) + " s";
    report(8, "sweep reproduction", ghz_ok && w_ok, detail);
}

void criterion9() {
    std::string detail;
    bool pass = true;

    // Fidelity range and global-phase invariance.
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    const auto basis = enumerate_basis(3);
    double worst_phase = 0.0;
    bool in_range = true;
    for (int k = 0; k < 1000; ++k) {
        StateVector s{Eigen::VectorXcd(27), 0.0};
        for (Eigen::Index i = 0; i < 27; ++i) s.amplitudes(i) = {n(rng), n(rng)};
        s.amplitudes.normalize();
        StateVector t = s;
        t.amplitudes *= std::polar(1.0, ph(rng));
        for (auto f : {+[](const StateVector& x) { return ghz_fidelity(x); },
                       +[](const StateVector& x) { return w_fidelity(x); }}) {
            const double a = f(s);
            in_range = in_range && a >= -1e-15 && a <= 1.0 + 1e-12;
            worst_phase = std::max(worst_phase, std::abs(a - f(t)));
        }
    }
    pass = pass && in_range && worst_phase <= 1e-12;
    detail += "1000 states: range " + std::string(in_range ? "ok" : "violated") +
              ", max phase change " + num(worst_phase);

    // Zero-Rabi column and worker-count determinism on a small grid.
    RunConfig w = recipe("sweep_w_fidelity");
    SweepGrid grid = w.sweep_grid();
    grid.alpha = {0.0, -60.0, 3};
    grid.omega = {0.0, 260.0, 3};
    const SweepResult one = run_sweep(grid, w.integrator, 1);
    const SweepResult four = run_sweep(grid, w.integrator, 4);
    const bool same = sweep_csv(one) == sweep_csv(four);
    double col = 0.0;
    for (std::size_t ia = 0; ia < one.alphas.size(); ++ia) col = std::max(col, std::abs(one.cell(ia, 0).fidelity));
    RunConfig gcfg = recipe("sweep_ghz_fidelity");
    SweepGrid ggrid = gcfg.sweep_grid();
    ggrid.alpha = {0.0, -300.0, 3};
    ggrid.omega = {0.0, 150.0, 2};
    const SweepResult gr = run_sweep(ggrid, gcfg.integrator, 1);
    for (std::size_t ia = 0; ia < gr.alphas.size(); ++ia) col = std::max(col, std::abs(gr.cell(ia, 0).fidelity - 0.5));
    pass = pass && same && col <= 1e-12;
    detail += "; zero-Rabi column max deviation " + num(col) + "; 1 vs 4 workers CSV " +
              (same ? "identical" : "DIFFERENT");

    // grr / rrg mirror symmetry along the W trajectory.
    const PointRun r = run_point("evolve_w", "direct");
    const auto p = r.tr.populations();
    const auto a = static_cast<Eigen::Index>(basis.index("grr"));
    const auto b = static_cast<Eigen::Index>(basis.index("rrg"));
    const double sym = (p.col(a) - p.col(b)).cwiseAbs().maxCoeff();
    pass = pass && sym <= 1e-6;
    detail += "; max|P_grr-P_rrg| " + num(sym);
    report(9, "property suites", pass, detail);
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.insert(std::stoi(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--recipes" && i + 1 < argc) {
            recipes = argv[++i];
        } else if (a == "--known-red" && i + 1 < argc) {
            known_red = parse_list(argv[++i]);
        } else if (a == "--report" && i + 1 < argc) {
            report_file.open(argv[++i]);
        } else if (a == "--skip-sweeps") {
            skip_sweeps = true;
        } else {
            std::cerr << "usage: acceptance [--recipes DIR] [--known-red 1,2,...] [--skip-sweeps] [--report FILE]\n";
            return 2;
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<int, std::function<void(const std::string&)>>> rest = {
        {2, criterion2}, {3, [](const std::string&) { criterion3(); }},
        {4, [](const std::string&) { criterion4(); }}, {5, criterion5}, {6, criterion6},
        {7, criterion7}, {8, criterion8}, {9, [](const std::string&) { criterion9(); }},
    };
    std::string conv = "direct";
    try {
        conv = criterion1();
    } catch (const std::exception& e) {
        report(1, "GHZ point", false, std::string("error: ") + e.what());
    }
    say("convention used for the remaining criteria: " + conv);
    for (const auto& [id, run] : rest) {
        try {
            run(conv);
        } catch (const std::exception& e) {
            report(id, "error", false, e.what());
        }
    }
    say("total " + num(seconds_since(t0), 4) + " s, " + std::to_string(unexpected_failures) +
        " unexpected failure(s)");
    return unexpected_failures == 0 ? 0 : 1;
}
