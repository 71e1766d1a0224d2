#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mhd1d/diagnostics.hpp"
#include "mhd1d/solver.hpp"

namespace mhd1d {

/// Empirical constants for the potential-energy bounds
///   c1 (r - rb)^2 <= Phi(r) <= c2 (r - rb)^2          on [0, 2 rb]
///   r^g - rb^g <= C1 (r - rb)^g <= C2 Phi(r)          on (2 rb, 10 rb]
/// taken as the extreme ratios over a dense sample.
struct PotentialBounds {
    double c1 = 0.0, c2 = 0.0, C1 = 0.0, C2 = 0.0;
    bool valid() const;
};
PotentialBounds potential_energy_bounds(double gamma, double rho_bar, std::size_t samples = 4001);

/// Smallest second difference of Phi over [0, 10 rho_bar] divided by h^2;
/// positive when Phi is strictly convex on the sample.
double potential_convexity_margin(double gamma, double rho_bar, std::size_t samples = 4001);

/// Sup norm of the tendencies at the constant far-field state.
double steady_state_residual(const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid, Mode mode);

/// |sum(rho_T - rho_0) dx| / ||rho_0 - rho_bar||_L1.
double relative_mass_defect(const State& initial, const State& final_state, const PhysParams& params,
                            const Grid1D& grid);

/// Largest rise of E + D_u + D_b above its running minimum, relative to its
/// initial value.
double energy_budget_drift(const DiagnosticsRecord& record);

/// Flux-identity residual on the manufactured state at time t, grids n and 2n.
struct FluxIdentityStudy {
    double coarse = 0.0, fine = 0.0;
    double contraction() const { return coarse / fine; }
};
FluxIdentityStudy flux_identity_study(const PhysParams& params, const SchemeConfig& scheme, std::size_t n_coarse,
                                      double t = 0.3, double half_width = 10.0);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Built-in verification battery. `on_result` sees each check as it finishes.
std::vector<CheckResult> run_verification(const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace mhd1d
