#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhd1d/core.hpp"

namespace mhd1d {

enum class Reconstruction { FirstOrderUpwind, MusclMinmod };
enum class TimeIntegrator { SspRk2, SspRk3 };
enum class Mode { Resistive, NonResistive };

std::string to_string(Reconstruction r);
std::string to_string(TimeIntegrator t);
std::string to_string(Mode m);
Reconstruction reconstruction_from_string(const std::string& s);
TimeIntegrator integrator_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

/// Raised when a tendency or an updated state stops being finite.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the solution reaches the truncated boundary.
class BoundaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SchemeConfig {
    double cfl_number = 0.45;
    double diffusion_number = 0.4;
    Reconstruction reconstruction = Reconstruction::MusclMinmod;
    /// TVB constant M for muscl_minmod: slopes whose undivided central
    /// difference is below M dx^2 are left unlimited (smooth extrema).
    double tvb_constant = 1.0;
    TimeIntegrator integrator = TimeIntegrator::SspRk2;
    double end_time = 1.0;
    /// Uniform diagnostics samples in (0, end_time], plus one at t = 0.
    int samples = 50;

    std::vector<std::string> violations() const;

    bool operator==(const SchemeConfig&) const = default;
};

/// Time derivatives of the prognostic fields, plus u_t recovered from them.
struct RhsOutput {
    std::vector<double> drho;
    std::vector<double> dmom;
    std::vector<double> db;
    std::vector<double> u_t;

    explicit RhsOutput(std::size_t n = 0) : drho(n), dmom(n), db(n), u_t(n) {}
};

/// Closed-form fields and derivatives of a manufactured solution at (x, t).
struct ManufacturedPoint {
    double rho, rho_t, rho_x;
    double u, u_t, u_x, u_xx;
    double b, b_t, b_x, b_xx;
};
using Manufactured = std::function<ManufacturedPoint(double x, double t)>;

/// Semi-discrete right-hand side. Far-field Dirichlet data enters through
/// two ghost nodes on each side.
RhsOutput rhs(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
              Mode mode);

/// As rhs(), with analytic sources that make `manufactured` an exact
/// solution of the forced system at time state.t.
RhsOutput mms_rhs(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
                  Mode mode, const Manufactured& manufactured);

/// Source terms alone (drho, dmom, db) for the manufactured solution.
RhsOutput mms_sources(const PhysParams& params, const Grid1D& grid, Mode mode, const Manufactured& manufactured,
                      double t);

/// Samples a manufactured solution onto the grid.
State sample_manufactured(const Manufactured& manufactured, const Grid1D& grid, double t);

double stable_dt(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid);

/// Reusable SSP Runge-Kutta stepper. Keeps scratch buffers between steps.
class Stepper {
public:
    Stepper(PhysParams params, SchemeConfig scheme, Grid1D grid, Mode mode,
            const Manufactured* manufactured = nullptr);

    /// Advances by dt. Negative densities are clipped to 0 and counted.
    State step(const State& state, double dt);

    std::size_t clip_events() const { return clip_events_; }
    const PhysParams& params() const { return params_; }
    const SchemeConfig& scheme() const { return scheme_; }
    const Grid1D& grid() const { return grid_; }
    Mode mode() const { return mode_; }

private:
    void evaluate(const State& s, RhsOutput& out) const;
    void finish_stage(State& s);

    PhysParams params_;
    SchemeConfig scheme_;
    Grid1D grid_;
    Mode mode_;
    const Manufactured* manufactured_;
    std::size_t clip_events_ = 0;
    RhsOutput k_;
};

State step(const State& state, double dt, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
           Mode mode, std::size_t* clip_events = nullptr);

/// Max deviation from (rho_bar, 0, b_bar) over the 3 outermost nodes per side.
double boundary_deviation(const State& state, const PhysParams& params);
inline constexpr double kBoundaryTolerance = 1e-6;

// --- checkpoints -------------------------------------------------------------

/// Header "n_cells L t", then one "x rho mom b" row per node.
void write_checkpoint(std::ostream& os, const State& state, const Grid1D& grid);
State read_checkpoint(std::istream& is, Grid1D* grid_out = nullptr);

}  // namespace mhd1d
