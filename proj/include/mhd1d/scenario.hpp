#pragma once

#include <string>
#include <vector>

#include "mhd1d/core.hpp"

namespace mhd1d {

/// Compatibility residual is not evaluated below this density.
inline constexpr double kCompatDensity = 1e-6;

enum class Preset { GaussianBump, InteriorVacuum, Custom };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& name);

/// Initial data. Presets:
///   gaussian_bump:   rho0 = rho_bar + a_rho exp(-x^2/sigma^2)
///   interior_vacuum: rho0 = rho_bar (1 - exp(-x^2/sigma^2))^2
/// and for both u0 = a_u x exp(-x^2/sigma^2), b0 = b_bar + a_b exp(-x^2/sigma^2).
/// `custom` takes node values directly (u given as velocity).
struct ScenarioSpec {
    Preset preset = Preset::GaussianBump;
    double a_rho = 0.2;
    double a_u = 0.2;
    double a_b = 0.2;
    double sigma = 2.0;
    std::vector<double> custom_rho;
    std::vector<double> custom_u;
    std::vector<double> custom_b;

    std::vector<std::string> violations(const PhysParams& params) const;

    bool operator==(const ScenarioSpec&) const = default;
};

State build_initial_state(const ScenarioSpec& spec, const PhysParams& params, const Grid1D& grid);

/// Trapezoid value of the |x|^alpha-weighted initial energy.
double weighted_moment_check(const State& state0, const PhysParams& params, const Grid1D& grid);

struct CompatibilityResult {
    FieldScalar g;
    double g_l2 = 0.0;
    /// Nodes with rho0 <= kCompatDensity, where g is reported as 0.
    std::vector<std::size_t> flagged;
};

/// g = (mu u0_x - P(rho0) - b0^2/2)_x / sqrt(rho0) at non-vacuum nodes.
CompatibilityResult compatibility_residual(const State& state0, const PhysParams& params, const Grid1D& grid);

/// Composite trapezoid rule on the grid nodes.
double trapezoid(std::span<const double> f, double dx);

}  // namespace mhd1d
