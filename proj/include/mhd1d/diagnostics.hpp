#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mhd1d/core.hpp"
#include "mhd1d/solver.hpp"

namespace mhd1d {

// --- norms and functionals ---------------------------------------------------

/// Discrete L^p norm (sum |f|^p dx)^(1/p); p = 0 selects the sup norm.
double lp_norm(std::span<const double> f, int p, const Grid1D& grid);
inline constexpr int kSupNorm = 0;

/// (sum f^2 |x|^alpha dx)^(1/2).
double weighted_l2(std::span<const double> f, double alpha, const Grid1D& grid);

/// Pointwise energy density rho u^2/2 + Phi(rho) + (b - b_bar)^2/2.
std::vector<double> energy_density(const State& state, const PhysParams& params);
double total_energy(const State& state, const PhysParams& params, const Grid1D& grid);
double weighted_energy(const State& state, const PhysParams& params, const Grid1D& grid);

/// xi(x) = int_{-L}^{x} rho u dy, cumulative trapezoid from the left edge.
FieldScalar momentum_potential(const State& state, const Grid1D& grid);

/// || rho u_dot - F_x ||_L2 with u_t taken from the RHS at the same instant.
double flux_identity_residual(const State& state, const RhsOutput& rhs_output, const PhysParams& params,
                              const Grid1D& grid);

// --- time series -------------------------------------------------------------

/// One sample. Accumulators (diss_*, *_int) are integrals over [0, t].
struct DiagnosticsRow {
    double t = 0.0;
    double energy = 0.0;
    double weighted_energy = 0.0;
    double diss_u = 0.0;
    double diss_b = 0.0;
    double weighted_diss_u = 0.0;
    double weighted_diss_b = 0.0;
    double sup_rho = 0.0;
    double sup_abs_b = 0.0;
    double sup_abs_u = 0.0;
    double rho_dev_l2 = 0.0;
    double b_dev_l4 = 0.0;
    double b_dev_l6_pow6_int = 0.0;
    double ux_l2 = 0.0;
    double bx_l2 = 0.0;
    double rhox_l2 = 0.0;
    double sqrt_rho_udot_l2 = 0.0;
    double flux_identity_residual = 0.0;
    double xi_sup = 0.0;
    double clipping_count = 0.0;
    double rho_t_l2 = 0.0;
    double b_t_l2 = 0.0;
    double uxx_l2 = 0.0;
    double uxt_l2_sq_int = 0.0;
    double nu_bx_l2_sq_int = 0.0;

    bool operator==(const DiagnosticsRow&) const = default;
};

struct DiagnosticsColumn {
    std::string_view name;
    double DiagnosticsRow::*member;
};
const std::vector<DiagnosticsColumn>& diagnostics_columns();

struct DiagnosticsRecord {
    double nu = 0.0;
    /// Identifies scenario, grid and scheme; records compared across nu must agree.
    std::string config_tag;
    std::vector<DiagnosticsRow> rows;

    bool operator==(const DiagnosticsRecord&) const = default;
};

/// Instantaneous part of a row. Accumulator fields are left at zero.
DiagnosticsRow sample(const State& state, const RhsOutput& rhs_output, const PhysParams& params, const Grid1D& grid);

/// Per-step time integrals, trapezoid rule in time.
class DissipationAccumulator {
public:
    DissipationAccumulator(const PhysParams& params, const Grid1D& grid);

    /// Integrand values at `state`; call once at t=0, then after every step.
    void advance(const State& state, double dt);
    void add_sample_integrand(double t, double uxt_l2_sq);
    void fill(DiagnosticsRow& row) const;

private:
    struct Integrands {
        double diss_u, diss_b, wdiss_u, wdiss_b, b6, nubx;
    };
    Integrands integrands(const State& state) const;

    PhysParams params_;
    Grid1D grid_;
    bool started_ = false;
    Integrands last_{};
    Integrands total_{};
    double last_sample_t_ = 0.0;
    double last_uxt_ = 0.0;
    bool have_uxt_ = false;
    double uxt_total_ = 0.0;
};

void write_csv(std::ostream& os, const DiagnosticsRecord& record);
DiagnosticsRecord read_csv(std::istream& is);

// --- nu-independence -------------------------------------------------------

struct SpreadEntry {
    std::string quantity;
    std::vector<double> values;  // one per record, same order as the input
    double spread = 0.0;         // (max - min) / max|value|
    bool excluded = false;       // expected to depend on nu
    bool flagged = false;        // spread above threshold on a monitored quantity
};

struct NuIndependenceReport {
    std::vector<double> nu;
    std::vector<SpreadEntry> entries;
    double threshold = 0.10;

    bool any_flagged() const;
    const SpreadEntry& at(std::string_view quantity) const;
};

NuIndependenceReport nu_independence_report(const std::vector<DiagnosticsRecord>& records, double threshold = 0.10);

}  // namespace mhd1d
