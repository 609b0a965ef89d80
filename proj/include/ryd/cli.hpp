// cli.hpp — the four subcommands behind the rydsim executable. Each writes
// its files under cfg.out_dir with cfg.prefix and returns a process exit code.

#pragma once

#include "ryd/config.hpp"

#include <ostream>

namespace ryd {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_numerical = 2,
};

int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
/// Prints one PASS/FAIL line per invariant check.
int cmd_validate(const RunConfig& cfg, std::ostream& log);

} // namespace ryd
