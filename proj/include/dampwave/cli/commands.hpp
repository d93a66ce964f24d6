#pragma once

// Subcommands of the experiment runner. Each takes a loaded scenario, writes
// its files under the output directory and returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dampwave/cli/scenario.hpp"

namespace dampwave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime error, or every sweep cell failed
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAudit = 3;
inline constexpr int kExitZeroH = 4;
inline constexpr int kExitTolerance = 5;

struct GlobalOptions {
    std::filesystem::path config;
    std::filesystem::path out = ".";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;
};

int cmd_audit(const Scenario& sc, const GlobalOptions& opts, std::ostream& log);
int cmd_run(const Scenario& sc, const GlobalOptions& opts, std::ostream& log);
int cmd_compare(const Scenario& sc, const GlobalOptions& opts, std::ostream& log);
int cmd_sweep(const Scenario& sc, const GlobalOptions& opts, std::ostream& log);

/// Loads opts.config, applies --seed and dispatches by name. Configuration
/// problems map to kExitConfig with the message on `err`.
int run_command(const std::string& name, const GlobalOptions& opts, std::ostream& log, std::ostream& err);

/// Command-line entry point.
int main_entry(int argc, char** argv);

}  // namespace dampwave::cli
