#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhd1d/diagnostics.hpp"
#include "mhd1d/scenario.hpp"
#include "mhd1d/solver.hpp"

namespace mhd1d {

/// One evolving system together with its diagnostics.
class Simulation {
public:
    Simulation(const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid, Mode mode, State initial,
               std::string config_tag = {}, bool boundary_check = true);

    const State& state() const { return state_; }
    const Grid1D& grid() const { return stepper_.grid(); }
    const PhysParams& params() const { return stepper_.params(); }
    Mode mode() const { return stepper_.mode(); }
    const DiagnosticsRecord& record() const { return record_; }
    std::size_t clip_events() const { return stepper_.clip_events(); }

    double stable_dt() const;
    /// Steps by dt; `t_end` (when given) pins the new time exactly.
    void advance(double dt, double t_end);
    /// Evaluates the RHS at the current state and appends a diagnostics row.
    void take_sample();

private:
    Stepper stepper_;
    State state_;
    DissipationAccumulator accumulator_;
    DiagnosticsRecord record_;
    bool boundary_check_;
};

/// Uniform sample times 0, T/S, ..., T. A single sample when T = 0.
std::vector<double> sample_times(const SchemeConfig& scheme);

/// Advances all simulations in lockstep to scheme.end_time. The first
/// simulation dictates dt; every simulation is sampled at the shared sample
/// times. `on_step` runs after each accepted step with the dt used.
void integrate_lockstep(std::span<Simulation* const> sims, const SchemeConfig& scheme,
                        const std::function<void(double)>& on_step = {});

struct RunMonitors {
    std::string config_tag;
    bool boundary_check = true;
};

struct RunResult {
    State final_state;
    DiagnosticsRecord record;
    std::size_t clip_events = 0;
};

RunResult run(const ScenarioSpec& scenario, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
              Mode mode, const RunMonitors& monitors = {});

}  // namespace mhd1d
