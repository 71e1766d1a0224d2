#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mhd1d {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitBoundary = 4,
    kExitIo = 5,
    kExitVerifyFailed = 6,
};

/// Overrides the output directory named in the config.
inline constexpr const char* kOutputDirEnv = "MHD1D_OUTPUT_DIR";

struct CommandOptions {
    std::filesystem::path config_path;
    /// --output-dir; wins over the environment variable and the config.
    std::optional<std::filesystem::path> output_dir;
    unsigned jobs = 1;
};

/// Writes diagnostics.csv, final_state.dat, config.json and manifest.json.
int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Writes report.json, diagnostics_nu_<k>.csv per nu, config.json and
/// manifest.json. The report is rewritten as each pair completes.
int cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Runs the verification battery; one line per check.
int cmd_verify(std::ostream& out, std::ostream& err);

}  // namespace mhd1d
