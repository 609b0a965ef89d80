#include "ryd/cli.hpp"

#include "ryd/analysis.hpp"
#include "ryd/errors.hpp"
#include "ryd/io.hpp"
#include "ryd/observe.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

namespace ryd {

namespace {

using nlohmann::json;

OutputMeta meta_of(const RunConfig& cfg) {
    return {cfg.hash, cfg.options.convention};
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& suffix) {
    return cfg.out_dir / (cfg.prefix + suffix);
}

std::string fmt(double x) {
    return format_number(x);
}

} // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    const TimeWindow w = cfg.spectrum.window.value_or(resolve_window(cfg.integrator, cfg.pulse));
    std::vector<double> times(static_cast<std::size_t>(cfg.spectrum.samples) + 1);
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = w.start + (w.end - w.start) * static_cast<double>(i) / cfg.spectrum.samples;
    }
    const SpectrumTrace trace = spectrum_trace(cfg.system, cfg.pulse, times);
    const CollectiveBasis basis = enumerate_basis(cfg.system.n_atoms);
    const auto crossings = crossing_report(cfg.system, cfg.pulse, w);
    const OutputMeta meta = meta_of(cfg);

    write_file(out_path(cfg, "_spectrum.csv"), spectrum_csv(trace));
    write_json(out_path(cfg, "_spectrum.json"), spectrum_sidecar(trace, basis, meta));
    write_json(out_path(cfg, "_crossings.json"), crossing_json(crossings, meta));

    log << "unique energies: " << trace.classes.size() << "\n";
    for (const auto& c : crossings) {
        log << "crossing " << c.state << " (x" << c.degeneracy << ") at t=" << fmt(c.time) << "\n";
    }
    return exit_ok;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
    const Model model(cfg.system, cfg.pulse, cfg.options);
    const CollectiveBasis& basis = model.basis();
    Trajectory tr;
    try {
        tr = evolve(model, cfg.integrator, ground_state(basis));
    } catch (const IntegrationError& e) {
        log << "integration failed: " << e.what() << "\n";
        return exit_numerical;
    }

    std::vector<Column> extra;
    json summary = {{"config_hash", cfg.hash},
                    {"angular_convention", to_string(cfg.options.convention)},
                    {"coupling", to_string(cfg.options.coupling)},
                    {"stepper", to_string(cfg.integrator.stepper)},
                    {"dt", tr.dt},
                    {"steps", tr.steps},
                    {"max_norm_drift", tr.max_norm_drift}};
    if (cfg.pulse.chirp_off_time) summary["chirp_off_time"] = *cfg.pulse.chirp_off_time;

    if (basis.n_atoms() >= 2) {
        std::vector<double> f(tr.times.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            const StateVector s = tr.sample(i);
            f[i] = cfg.protocol == Protocol::ghz ? ghz_fidelity(s) : w_fidelity(s, cfg.w_prefactor);
        }
        const std::string name = cfg.protocol == Protocol::ghz ? "F_ghz" : "F_w";
        summary[name] = f.back();
        log << name << " = " << fmt(f.back()) << "\n";
        extra.emplace_back(name, std::move(f));
    }

    if (cfg.effective_overlay && cfg.protocol == Protocol::ghz) {
        EffectiveTwoLevel eff{cfg.system, cfg.pulse, 1.0, cfg.options.convention};
        try {
            if (cfg.effective_prefactor) {
                eff.prefactor = *cfg.effective_prefactor;
            } else {
                const Calibration cal = calibrate_prefactor(eff, cfg.integrator, tr);
                eff.prefactor = cal.prefactor;
                summary["effective_max_deviation"] = cal.max_deviation;
                log << "calibrated prefactor c = " << fmt(cal.prefactor)
                    << " (max |dP_ggg| = " << fmt(cal.max_deviation) << ")\n";
            }
            summary["effective_prefactor"] = eff.prefactor;
            const Trajectory et = evolve_effective(eff, cfg.integrator);
            std::vector<double> pg(et.times.size()), pr(et.times.size());
            for (std::size_t i = 0; i < pg.size(); ++i) {
                pg[i] = std::norm(et.amplitudes(static_cast<Eigen::Index>(i), 0));
                pr[i] = std::norm(et.amplitudes(static_cast<Eigen::Index>(i), 1));
            }
            extra.emplace_back("eff_ggg", std::move(pg));
            extra.emplace_back("eff_rrr", std::move(pr));
        } catch (const SingularityError& e) {
            log << "effective overlay skipped: " << e.what() << "\n";
        }
    }

    json finals = json::object();
    const Eigen::VectorXd p = tr.final_state.amplitudes.cwiseAbs2();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        finals[basis.label(i)] = p(static_cast<Eigen::Index>(i));
    }
    summary["final_populations"] = finals;

    write_file(out_path(cfg, "_trajectory.csv"), trajectory_csv(tr, basis, extra));
    write_json(out_path(cfg, "_trajectory.json"), summary);
    log << "final populations:";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double v = p(static_cast<Eigen::Index>(i));
        if (v >= 1e-3) log << " " << basis.label(i) << "=" << fmt(v);
    }
    log << "\nmax norm drift " << fmt(tr.max_norm_drift) << "\n";
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.sweep) throw ConfigError("sweep: section missing");
    const SweepResult result = run_sweep(cfg.sweep_grid(), cfg.integrator, cfg.sweep->workers);
    const OutputMeta meta = meta_of(cfg);
    json md = sweep_metadata(result, meta);

    std::optional<Contour> contour;
    if (result.protocol == Protocol::w) {
        contour = equal_population_contour(result);
        json lines = json::array();
        for (const auto& line : contour->lines) {
            json pts = json::array();
            for (const auto& [a, o] : line) pts.push_back({a, o});
            lines.push_back(pts);
        }
        write_json(out_path(cfg, "_contour.json"),
                   {{"config_hash", cfg.hash}, {"threshold", 0.01}, {"lines", lines}});
    }

    write_file(out_path(cfg, "_sweep.csv"), sweep_csv(result));
    write_json(out_path(cfg, "_sweep.json"), md);
    write_json(out_path(cfg, "_failures.json"), failure_manifest(result));
    if (cfg.sweep->svg) {
        write_file(out_path(cfg, "_sweep.svg"),
                   heatmap_svg(result, cfg.sweep->svg_field, contour ? &*contour : nullptr, meta));
    }

    double best = -1.0;
    const SweepCell* best_cell = nullptr;
    for (const auto& c : result.cells) {
        if (!c.failed && c.fidelity > best) {
            best = c.fidelity;
            best_cell = &c;
        }
    }
    log << result.cells.size() << " cells, " << result.failure_count() << " failed\n";
    if (best_cell) {
        log << "max fidelity " << fmt(best) << " at alpha=" << fmt(best_cell->alpha)
            << " omega=" << fmt(best_cell->omega) << "\n";
    }
    return result.failure_count() == result.cells.size() ? exit_numerical : exit_ok;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
    bool ok = true;
    auto report = [&](bool pass, const std::string& name, const std::string& detail) {
        ok = ok && pass;
        log << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    };
    const Model model(cfg.system, cfg.pulse, cfg.options);
    const TimeWindow w = resolve_window(cfg.integrator, cfg.pulse);

    double herm = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const double t = w.start + (w.end - w.start) * k / 4.0;
        const Eigen::MatrixXcd h = model.dense(t);
        herm = std::max(herm, (h - h.adjoint()).cwiseAbs().maxCoeff());
    }
    report(herm <= 1e-12, "hermiticity", "max |H - H^dag| = " + fmt(herm));

    try {
        const Trajectory tr = evolve(model, cfg.integrator, ground_state(model.basis()));
        report(tr.max_norm_drift <= 1e-6, "norm", "max drift " + fmt(tr.max_norm_drift));
        const Trajectory ref = oracle_evolve(model, cfg.integrator, ground_state(model.basis()));
        const double d = (tr.final_state.amplitudes - ref.final_state.amplitudes).norm();
        report(d <= 1e-5, "oracle", "|psi - psi_oracle| = " + fmt(d) + " at dt=" + fmt(tr.dt));
    } catch (const IntegrationError& e) {
        report(false, "norm", e.what());
    }

    if (cfg.system.n_atoms >= 2 && cfg.system.delta1 != 0.0 && cfg.system.v(0, 1) > 0.0) {
        const EffectiveTwoLevel eff{cfg.system, cfg.pulse, 1.0, cfg.options.convention};
        std::vector<double> times;
        for (int k = 0; k <= 200; ++k) times.push_back(w.start + (w.end - w.start) * k / 200.0);
        const DressedAngles da = dressed_angles(eff, times);
        double err = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (da.undefined[i]) continue;
            err = std::max(err, std::abs(da.cos_theta[i] * da.cos_theta[i] +
                                         da.sin_theta[i] * da.sin_theta[i] - 1.0));
        }
        report(err <= 1e-12, "dressed angles", "max |cos^2 + sin^2 - 1| = " + fmt(err));
    } else {
        log << "SKIP dressed angles: effective model undefined for this system\n";
    }

    // Count distinct diagonal values at a few generic parameter draws and
    // compare with the structural class partition.
    const CollectiveBasis& basis = model.basis();
    const auto classes = energy_classes(basis, cfg.system.v);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PulseSpec p = cfg.pulse;
    SystemSpec s = cfg.system;
    std::vector<std::vector<double>> columns(basis.size());
    for (int draw = 0; draw < 3; ++draw) {
        s.delta1 = 1000.0 * u(rng);
        s.delta2 = 100.0 * u(rng);
        p.alpha1 = 100.0 * u(rng);
        p.alpha2 = 100.0 * u(rng);
        p.chirp_off_time.reset();
        const double t = p.t_center + u(rng);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            columns[i].push_back(bare_energy(basis.state(i), s, p, t));
        }
    }
    std::set<std::vector<double>> distinct(columns.begin(), columns.end());
    report(distinct.size() == classes.size(), "unique energies",
           std::to_string(classes.size()) + " classes, " + std::to_string(distinct.size()) +
               " distinct energy signatures");
    return ok ? exit_ok : exit_numerical;
}

} // namespace ryd
