#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd1d/diagnostics.hpp"
#include "mhd1d/scenario.hpp"
#include "mhd1d/solver.hpp"

namespace mhd1d {

/// Everything a resistive/non-resistive pair shares. params.nu is ignored.
struct PairConfig {
    PhysParams params;
    ScenarioSpec scenario;
    SchemeConfig scheme;
    double half_width = 20.0;
    std::size_t n_cells = 2048;
    std::string config_tag;

    Grid1D grid() const { return {half_width, n_cells}; }
};

/// Errors between the resistive solution at one nu and the non-resistive one.
struct PairRecord {
    double nu = 0.0;
    bool ok = true;
    /// "numerical", "boundary" or "domain" when !ok.
    std::string failure_kind;
    std::string failure;
    /// sup_t of the summed squared L2 differences of rho, u and b.
    double e_sup = 0.0;
    double e_sup_rho = 0.0;
    double e_sup_u = 0.0;
    double e_sup_b = 0.0;
    /// int_0^T mu ||(u - u~)_x||^2 dt
    double e_diss = 0.0;
    double e_total = 0.0;
    /// int_0^T ||nu b_x||^2 dt
    double aux = 0.0;
    std::size_t clip_events = 0;
    DiagnosticsRecord diagnostics;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares of log(error) against log(nu).
RateFit fit_rate(std::span<const double> nu_values, std::span<const double> errors);

PairRecord run_pair(double nu, const PairConfig& config);

struct ConvergenceReport {
    std::vector<double> nu;
    std::vector<PairRecord> entries;
    std::optional<RateFit> fit;        // e_total vs nu
    std::optional<RateFit> fit_u;      // sup ||u - u~||^2 vs nu
    std::optional<RateFit> fit_aux;    // int ||nu b_x||^2 vs nu
    bool degenerate = false;
    std::string fit_note;
    bool super_linear = false;         // slope > 1.25: flagged, not rejected
    bool e_total_monotone = false;     // non-increasing as nu decreases
    bool diff_monotone = false;        // unsquared sup differences non-increasing
    std::optional<double> pollution_proxy;
    bool pollution_guard_passed = false;
    std::string guidance;
    std::string fingerprint;
};

struct SweepOptions {
    unsigned jobs = 1;
    bool pollution_guard = true;
    std::string fingerprint;
    /// Called (serialized) as each pair finishes, successful or not.
    std::function<void(const PairRecord&)> on_entry;
};

ConvergenceReport sweep(std::span<const double> nu_list, const PairConfig& config, const SweepOptions& options = {});

/// Discretization proxy: sup over sample times of the summed squared L2
/// difference between non-resistive runs on n and 2n cells (fine grid
/// restricted by pairwise averaging).
double discretization_proxy(const PairConfig& config);

/// Assembles the report fields that depend only on finished entries.
void finalize_report(ConvergenceReport& report);

nlohmann::json to_json(const ConvergenceReport& report);

}  // namespace mhd1d
