#include "ryd/config.hpp"

#include "ryd/analysis.hpp"
#include "ryd/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ryd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ok.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

const json& required(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path + "." + key, "missing required key");
    return j.at(key);
}

template <class F>
auto parsed(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

TimeWindow window(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [start, end]");
    TimeWindow w{number(j[0], path + "[0]"), number(j[1], path + "[1]")};
    if (!(w.start < w.end)) fail(path, "start must precede end");
    return w;
}

AxisRange axis(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected [min, max, steps]");
    AxisRange r{number(j[0], path + "[0]"), number(j[1], path + "[1]"), integer(j[2], path + "[2]")};
    if (r.steps < 2) fail(path, "steps must be >= 2");
    return r;
}

SystemSpec parse_system(const json& j) {
    const std::string p = "system";
    check_object(j, p, {"n_atoms", "delta1", "delta2", "v", "lattice"});
    SystemSpec s;
    s.n_atoms = integer(required(j, "n_atoms", p), p + ".n_atoms");
    if (s.n_atoms < 1 || s.n_atoms > kMaxAtoms) {
        fail(p + ".n_atoms", "must be between 1 and " + std::to_string(kMaxAtoms));
    }
    s.delta1 = number(required(j, "delta1", p), p + ".delta1");
    s.delta2 = number(required(j, "delta2", p), p + ".delta2");
    // An explicit matrix wins over a lattice description.
    if (j.contains("v")) {
        const json& v = j.at("v");
        if (!v.is_array() || static_cast<int>(v.size()) != s.n_atoms) {
            fail(p + ".v", "expected " + std::to_string(s.n_atoms) + " rows");
        }
        s.v = InteractionMatrix::Zero(s.n_atoms, s.n_atoms);
        for (int r = 0; r < s.n_atoms; ++r) {
            const std::string rp = p + ".v[" + std::to_string(r) + "]";
            const json& row = v[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<int>(row.size()) != s.n_atoms) {
                fail(rp, "expected " + std::to_string(s.n_atoms) + " columns");
            }
            for (int c = 0; c < s.n_atoms; ++c) {
                s.v(r, c) = number(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
            }
        }
    } else if (j.contains("lattice")) {
        const json& l = j.at("lattice");
        const std::string lp = p + ".lattice";
        check_object(l, lp, {"c_coeff", "exponent", "spacing", "length"});
        if (l.contains("spacing") == l.contains("length")) {
            fail(lp, "give exactly one of spacing or length");
        }
        const double c = number(required(l, "c_coeff", lp), lp + ".c_coeff");
        const int e = integer(required(l, "exponent", lp), lp + ".exponent");
        s.v = parsed(lp, [&] {
            const LatticeSpec spec =
                l.contains("spacing")
                    ? LatticeSpec{c, e, number(l.at("spacing"), lp + ".spacing"), s.n_atoms}
                    : LatticeSpec::from_length(c, e, number(l.at("length"), lp + ".length"),
                                               s.n_atoms);
            return lattice_interactions(spec);
        });
    } else if (s.n_atoms == 1) {
        s.v = InteractionMatrix::Zero(1, 1);
    } else {
        fail(p, "needs an interaction matrix v or a lattice");
    }
    parsed(p, [&] {
        s.validate();
        return 0;
    });
    return s;
}

PulseSpec parse_pulse(const json& j, const SystemSpec& system) {
    const std::string p = "pulse";
    check_object(j, p, {"omega01", "omega02", "tau0", "t_center", "alpha1", "alpha2", "chirp_off",
                        "chirp_ramp"});
    PulseSpec pulse;
    pulse.omega01 = number(required(j, "omega01", p), p + ".omega01");
    pulse.omega02 = number(required(j, "omega02", p), p + ".omega02");
    pulse.tau0 = number(required(j, "tau0", p), p + ".tau0");
    pulse.t_center = number(required(j, "t_center", p), p + ".t_center");
    pulse.alpha1 = number(required(j, "alpha1", p), p + ".alpha1");
    pulse.alpha2 = number(required(j, "alpha2", p), p + ".alpha2");
    if (j.contains("chirp_ramp")) pulse.chirp_ramp = number(j.at("chirp_ramp"), p + ".chirp_ramp");
    if (j.contains("chirp_off")) {
        const json& off = j.at("chirp_off");
        if (off.is_string()) {
            if (off.get<std::string>() != "resonance") {
                fail(p + ".chirp_off", "expected a time or \"resonance\"");
            }
            try {
                pulse.chirp_off_time = resonance_time(system, pulse);
            } catch (const NoCrossingError& e) {
                fail(p + ".chirp_off", e.what());
            }
        } else {
            pulse.chirp_off_time = number(off, p + ".chirp_off");
        }
    }
    parsed(p, [&] {
        pulse.validate();
        return 0;
    });
    return pulse;
}

IntegratorConfig parse_integrator(const json& j) {
    const std::string p = "integrator";
    check_object(j, p, {"dt", "stepper", "window", "samples", "convergence_halvings",
                        "convergence_tolerance", "max_norm_drift"});
    IntegratorConfig c;
    if (j.contains("dt")) c.dt = number(j.at("dt"), p + ".dt");
    if (j.contains("stepper")) {
        c.stepper = parsed(p + ".stepper",
                           [&] { return parse_stepper(string(j.at("stepper"), p + ".stepper")); });
    }
    if (j.contains("window")) c.window = window(j.at("window"), p + ".window");
    if (j.contains("samples")) c.samples = integer(j.at("samples"), p + ".samples");
    if (j.contains("convergence_halvings")) {
        c.convergence_halvings = integer(j.at("convergence_halvings"), p + ".convergence_halvings");
    }
    if (j.contains("convergence_tolerance")) {
        c.convergence_tolerance = number(j.at("convergence_tolerance"), p + ".convergence_tolerance");
    }
    if (j.contains("max_norm_drift")) {
        c.max_norm_drift = number(j.at("max_norm_drift"), p + ".max_norm_drift");
    }
    parsed(p, [&] {
        c.validate();
        return 0;
    });
    return c;
}

} // namespace

SweepGrid RunConfig::sweep_grid() const {
    if (!sweep) throw ConfigError("sweep: section missing");
    return {sweep->alpha, sweep->omega, system, pulse, protocol, options};
}

RunConfig parse_config(const json& j) {
    check_object(j, "config", {"description", "angular_convention", "coupling", "protocol", "system",
                               "pulse", "integrator", "observables", "spectrum", "sweep", "output"});
    RunConfig cfg;
    cfg.source = j;
    cfg.hash = fnv1a_hex(j.dump());
    if (j.contains("description")) cfg.description = string(j.at("description"), "description");
    if (j.contains("angular_convention")) {
        cfg.options.convention = parsed("angular_convention", [&] {
            return parse_convention(string(j.at("angular_convention"), "angular_convention"));
        });
    }
    if (j.contains("coupling")) {
        cfg.options.coupling =
            parsed("coupling", [&] { return parse_coupling(string(j.at("coupling"), "coupling")); });
    }
    if (j.contains("protocol")) {
        cfg.protocol =
            parsed("protocol", [&] { return parse_protocol(string(j.at("protocol"), "protocol")); });
    }
    cfg.system = parse_system(required(j, "system", "config"));
    cfg.pulse = parse_pulse(required(j, "pulse", "config"), cfg.system);
    if (j.contains("integrator")) cfg.integrator = parse_integrator(j.at("integrator"));
    try {
        const TimeWindow w = resolve_window(cfg.integrator, cfg.pulse);
        if (cfg.pulse.chirp_off_time &&
            (*cfg.pulse.chirp_off_time < w.start || *cfg.pulse.chirp_off_time > w.end)) {
            fail("pulse.chirp_off", "lies outside the simulation window");
        }
    } catch (const std::invalid_argument& e) {
        fail("integrator", e.what());
    }

    if (j.contains("observables")) {
        const json& o = j.at("observables");
        const std::string p = "observables";
        check_object(o, p, {"w_prefactor", "effective_overlay", "effective_prefactor"});
        if (o.contains("w_prefactor")) {
            const std::string s = string(o.at("w_prefactor"), p + ".w_prefactor");
            if (s == "normalized") {
                cfg.w_prefactor = WPrefactor::normalized;
            } else if (s == "literal_half") {
                cfg.w_prefactor = WPrefactor::literal_half;
            } else {
                fail(p + ".w_prefactor", "expected normalized|literal_half");
            }
        }
        if (o.contains("effective_overlay")) {
            cfg.effective_overlay = boolean(o.at("effective_overlay"), p + ".effective_overlay");
        }
        if (o.contains("effective_prefactor")) {
            const json& c = o.at("effective_prefactor");
            if (c.is_string()) {
                if (c.get<std::string>() != "calibrate") {
                    fail(p + ".effective_prefactor", "expected a number or \"calibrate\"");
                }
            } else {
                cfg.effective_prefactor = number(c, p + ".effective_prefactor");
                if (!(*cfg.effective_prefactor > 0.0)) fail(p + ".effective_prefactor", "must be > 0");
            }
        }
    }
    if (j.contains("spectrum")) {
        const json& s = j.at("spectrum");
        check_object(s, "spectrum", {"window", "samples"});
        if (s.contains("window")) cfg.spectrum.window = window(s.at("window"), "spectrum.window");
        if (s.contains("samples")) cfg.spectrum.samples = integer(s.at("samples"), "spectrum.samples");
        if (cfg.spectrum.samples < 1) fail("spectrum.samples", "must be >= 1");
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        const std::string p = "sweep";
        check_object(s, p, {"alpha", "omega", "workers", "svg", "svg_field"});
        SweepConfig sw;
        sw.alpha = axis(required(s, "alpha", p), p + ".alpha");
        sw.omega = axis(required(s, "omega", p), p + ".omega");
        if (s.contains("workers")) sw.workers = integer(s.at("workers"), p + ".workers");
        if (s.contains("svg")) sw.svg = boolean(s.at("svg"), p + ".svg");
        if (s.contains("svg_field")) {
            sw.svg_field = string(s.at("svg_field"), p + ".svg_field");
            if (sw.svg_field != "fidelity" && sw.svg_field != "pop_metric") {
                fail(p + ".svg_field", "expected fidelity|pop_metric");
            }
        }
        cfg.sweep = sw;
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_object(o, "output", {"dir", "prefix"});
        if (o.contains("dir")) cfg.out_dir = string(o.at("dir"), "output.dir");
        if (o.contains("prefix")) cfg.prefix = string(o.at("prefix"), "output.prefix");
        if (cfg.prefix.empty()) fail("output.prefix", "must not be empty");
    }
    return cfg;
}

void apply_overrides(json& j, const Overrides& o) {
    if (!j.is_object()) return;
    if (o.convention) j["angular_convention"] = *o.convention;
    if (o.dt) j["integrator"]["dt"] = *o.dt;
    if (o.out_dir) j["output"]["dir"] = *o.out_dir;
    if (j.contains("sweep") && j["sweep"].is_object()) {
        if (o.workers) j["sweep"]["workers"] = *o.workers;
        if (o.svg) j["sweep"]["svg"] = *o.svg;
    }
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    apply_overrides(j, overrides);
    return parse_config(j);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace ryd
