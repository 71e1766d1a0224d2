#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd1d/core.hpp"
#include "mhd1d/limit_study.hpp"
#include "mhd1d/scenario.hpp"
#include "mhd1d/solver.hpp"

namespace mhd1d {

/// Parse or validation failure. `problems` lists every issue found, each
/// prefixed with its field path (e.g. "physics.gamma: gamma > 1").
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct RunConfig {
    PhysParams physics{0.1, 1e-3, 1.4, 1.0, 1.0, 2.0};
    ScenarioSpec scenario;
    SchemeConfig scheme;
    double half_width = 20.0;
    std::size_t n_cells = 2048;
    Mode mode = Mode::Resistive;
    std::string output_dir = "mhd1d-output";
    std::vector<double> nu_list{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

    Grid1D grid() const { return {half_width, n_cells}; }
    PairConfig pair_config() const;

    bool operator==(const RunConfig&) const = default;
};

/// Applies defaults for missing keys and validates. Unknown keys are errors.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field present, keys sorted.
nlohmann::json to_json(const RunConfig& config);
std::string canonical_config(const RunConfig& config);

/// SHA-256 (hex) of the canonical serialization, output_dir excluded.
std::string config_fingerprint(const RunConfig& config);
/// As config_fingerprint, also ignoring nu, nu_list and mode: identifies runs
/// whose diagnostics may be compared across nu.
std::string comparison_tag(const RunConfig& config);

std::string sha256_hex(const std::string& data);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct RunManifest {
    std::string command;
    std::string fingerprint;
    std::string tool_version;
    std::string start_time;
    std::string end_time;
    std::size_t clipping_count = 0;
    std::string boundary_monitor = "ok";
    std::string status = "ok";
    std::vector<std::string> outputs;
    std::vector<std::string> notes{
        "uxt_l2_sq_int integrates ||u_xt||^2 over sample times only; the other time integrals are per step"};
};
nlohmann::json to_json(const RunManifest& manifest);

std::string utc_timestamp();

}  // namespace mhd1d
