#include "ryd/cli.hpp"
#include "ryd/config.hpp"
#include "ryd/errors.hpp"
#include "ryd/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ryd;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
        "system": {"n_atoms": 3, "delta1": -1400, "delta2": -4.5,
                   "v": [[0, 60, 30], [60, 0, 60], [30, 60, 0]]},
        "pulse": {"omega01": 262, "omega02": 262, "tau0": 1, "t_center": 3,
                  "alpha1": -32, "alpha2": -32},
        "protocol": "w",
        "integrator": {"samples": 20}
    })");
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("ryd_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("minimal config parses with defaults") {
    const RunConfig c = parse_config(minimal());
    CHECK(c.system.v(0, 2) == 30);
    CHECK(c.options.convention == Convention::direct);
    CHECK(c.options.coupling == Coupling::half);
    CHECK(c.integrator.stepper == Stepper::dopri5);
    CHECK(c.integrator.dt == 1e-4);
    CHECK(c.protocol == Protocol::w);
    CHECK_FALSE(c.pulse.chirp_off_time);
    CHECK(c.hash.size() == 16);
}

TEST_CASE("schema errors are config errors") {
    auto bad = [](auto mutate) {
        json j = minimal();
        mutate(j);
        CHECK_THROWS_AS(parse_config(j), ConfigError);
    };
    bad([](json& j) { j["colour"] = "blue"; });
    bad([](json& j) { j["pulse"]["omega"] = 1; });
    bad([](json& j) { j["system"].erase("delta1"); });
    bad([](json& j) { j["system"]["v"][0][1] = 10; });   // asymmetric
    bad([](json& j) { j["system"]["n_atoms"] = 9; });
    bad([](json& j) { j["pulse"]["tau0"] = "wide"; });
    bad([](json& j) { j["angular_convention"] = "hz"; });
    bad([](json& j) { j["pulse"]["chirp_off"] = 7.0; });   // outside the window
    bad([](json& j) { j["pulse"]["alpha1"] = j["pulse"]["alpha2"] = 0; j["pulse"]["chirp_off"] = "resonance"; });
    bad([](json& j) { j["integrator"]["stepper"] = "euler"; });
    bad([](json& j) { j["sweep"] = {{"alpha", {0, 1, 1}}, {"omega", {0, 1, 3}}}; });

    try {
        json j = minimal();
        j["pulse"]["omega"] = 1;
        parse_config(j);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("pulse.omega") != std::string::npos);
    }
}

TEST_CASE("explicit interaction matrix wins over a lattice") {
    json j = minimal();
    j["system"]["lattice"] = {{"c_coeff", 1.0}, {"exponent", 6}, {"spacing", 1.0}};
    CHECK(parse_config(j).system.v(0, 1) == 60);
    j["system"].erase("v");
    CHECK(parse_config(j).system.v(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("resonance chirp-off and observables") {
    json j = minimal();
    j["system"]["delta1"] = -1500;
    j["system"]["delta2"] = -100;
    j["pulse"]["alpha1"] = j["pulse"]["alpha2"] = -176;
    j["pulse"]["chirp_off"] = "resonance";
    j["observables"] = {{"w_prefactor", "literal_half"}, {"effective_overlay", true},
                        {"effective_prefactor", 0.5}};
    const RunConfig c = parse_config(j);
    REQUIRE(c.pulse.chirp_off_time);
    CHECK(*c.pulse.chirp_off_time == doctest::Approx(3.0));
    CHECK(c.w_prefactor == WPrefactor::literal_half);
    CHECK(c.effective_prefactor == 0.5);
}

TEST_CASE("config hash tracks the effective config") {
    const json j = minimal();
    CHECK(parse_config(j).hash == parse_config(json::parse(j.dump())).hash);
    json k = j;
    apply_overrides(k, {.convention = "two_pi"});
    CHECK(parse_config(k).hash != parse_config(j).hash);
    CHECK(parse_config(k).options.convention == Convention::two_pi);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("recipes in the repository parse") {
    const std::filesystem::path dir = RYD_RECIPE_DIR;
    int n = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(load_config(e.path()));
        ++n;
    }
    CHECK(n >= 12);
}

TEST_CASE("subcommands write their files") {
    const auto dir = scratch("cli");
    json j = minimal();
    j["output"] = {{"dir", dir.string()}, {"prefix", "t"}};
    j["sweep"] = {{"alpha", {0, -40, 2}}, {"omega", {0, 200, 2}}, {"workers", 1}, {"svg", true}};
    const RunConfig c = parse_config(j);
    std::ostringstream log;
    CHECK(cmd_evolve(c, log) == exit_ok);
    CHECK(cmd_spectrum(c, log) == exit_ok);
    CHECK(cmd_sweep(c, log) == exit_ok);
    for (const char* f : {"t_trajectory.csv", "t_trajectory.json", "t_spectrum.csv", "t_spectrum.json",
                          "t_crossings.json", "t_sweep.csv", "t_sweep.json", "t_failures.json",
                          "t_contour.json", "t_sweep.svg"}) {
        CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
    }
    const std::string csv = slurp(dir / "t_trajectory.csv");
    CHECK(csv.rfind("t,ggg,gge,", 0) == 0);
    CHECK(csv.find(",F_w\n") != std::string::npos);
    CHECK(slurp(dir / "t_sweep.csv").rfind("alpha,omega,fidelity,pop_diff_or_sum,norm\n", 0) == 0);
    const json meta = json::parse(slurp(dir / "t_sweep.json"));
    CHECK(meta["config_hash"] == c.hash);
    CHECK(slurp(dir / "t_sweep.svg").find(c.hash) != std::string::npos);

    // Re-running gives byte-identical output.
    const std::string svg = slurp(dir / "t_sweep.svg");
    CHECK(cmd_sweep(c, log) == exit_ok);
    CHECK(slurp(dir / "t_sweep.svg") == svg);

    std::ostringstream vlog;
    json vj = minimal();
    vj["integrator"]["window"] = {2.0, 3.0};
    CHECK(cmd_validate(parse_config(vj), vlog) == exit_ok);
    CHECK(vlog.str().find("FAIL") == std::string::npos);
    CHECK(vlog.str().find("PASS unique energies: 12 classes") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("numerical failure exit code") {
    json j = minimal();
    j["angular_convention"] = "two_pi";
    j["integrator"]["dt"] = 2e-3;
    j["output"] = {{"dir", scratch("fail").string()}};
    std::ostringstream log;
    CHECK(cmd_evolve(parse_config(j), log) == exit_numerical);
    CHECK_THROWS_AS(cmd_sweep(parse_config(j), log), ConfigError);   // no sweep section
}
