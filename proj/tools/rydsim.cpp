// rydsim — spectrum / evolve / sweep / validate front end.

#include "ryd/cli.hpp"
#include "ryd/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

struct Common {
    std::string config;
    ryd::Overrides overrides;
    std::string convention;
    double dt{0.0};
    int workers{-1};
    bool svg{false};
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "run configuration (JSON)")->required();
    cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
    cmd->add_option("--convention", c.convention, "angular convention")
        ->check(CLI::IsMember({"direct", "two_pi"}));
    cmd->add_option("--dt", c.dt, "integrator step (us)")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", c.workers, "sweep worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--svg", c.svg, "write an SVG heat map (sweep)");
}

ryd::Overrides overrides_of(const Common& c) {
    ryd::Overrides o;
    if (!c.convention.empty()) o.convention = c.convention;
    if (c.dt > 0.0) o.dt = c.dt;
    if (c.workers >= 0) o.workers = c.workers;
    if (c.svg) o.svg = true;
    if (!c.out.empty()) o.out_dir = c.out;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chirped-pulse entanglement simulator for Rydberg atom chains"};
    app.require_subcommand(1);
    Common common;
    using Command = int (*)(const ryd::RunConfig&, std::ostream&);
    const std::pair<const char*, Command> commands[] = {
        {"spectrum", ryd::cmd_spectrum},
        {"evolve", ryd::cmd_evolve},
        {"sweep", ryd::cmd_sweep},
        {"validate", ryd::cmd_validate},
    };
    const char* help[] = {
        "bare-state energies and crossing times",
        "propagate |g...g> and write the population trajectory",
        "fidelity landscape over chirp rate and peak Rabi frequency",
        "run the invariant checks",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        subs.push_back(app.add_subcommand(commands[i].first, help[i]));
        add_common(subs.back(), common);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ryd::exit_config;
    }

    ryd::RunConfig cfg;
    try {
        cfg = ryd::load_config(common.config, overrides_of(common));
    } catch (const ryd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ryd::exit_config;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        try {
            return commands[i].second(cfg, std::cout);
        } catch (const ryd::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return ryd::exit_config;
        } catch (const std::invalid_argument& e) {
            std::cerr << "invalid parameters: " << e.what() << "\n";
            return ryd::exit_config;
        } catch (const std::exception& e) {
            std::cerr << "numerical failure: " << e.what() << "\n";
            return ryd::exit_numerical;
        }
    }
    return ryd::exit_config;
}
