#include "mhd1d/run.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mhd1d {

namespace {

PhysParams effective_params(PhysParams p, Mode mode) {
    if (mode == Mode::NonResistive) p.nu = 0.0;
    return p;
}

}  // namespace

Simulation::Simulation(const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid, Mode mode,
                       State initial, std::string config_tag, bool boundary_check)
    : stepper_(params, scheme, grid, mode),
      state_(std::move(initial)),
      accumulator_(effective_params(params, mode), grid),
      boundary_check_(boundary_check) {
    params.validate();
    state_.check(grid);
    record_.nu = effective_params(params, mode).nu;
    record_.config_tag = std::move(config_tag);
    accumulator_.advance(state_, 0.0);
}

double Simulation::stable_dt() const {
    return mhd1d::stable_dt(state_, stepper_.params(), stepper_.scheme(), stepper_.grid());
}

void Simulation::advance(double dt, double t_end) {
    state_ = stepper_.step(state_, dt);
    state_.t = t_end;
    accumulator_.advance(state_, dt);
    if (boundary_check_) {
        const double dev = boundary_deviation(state_, stepper_.params());
        if (dev > kBoundaryTolerance) {
            std::ostringstream msg;
            msg << "boundary monitor tripped at t = " << state_.t << " (deviation " << dev << ")";
            throw BoundaryError(msg.str());
        }
    }
}

void Simulation::take_sample() {
    const PhysParams p = effective_params(stepper_.params(), stepper_.mode());
    const RhsOutput r = rhs(state_, p, stepper_.scheme(), stepper_.grid(), stepper_.mode());
    DiagnosticsRow row = sample(state_, r, p, stepper_.grid());
    const auto uxt = ddx(r.u_t, stepper_.grid().dx());
    const double uxt_l2 = lp_norm(uxt, 2, stepper_.grid());
    accumulator_.add_sample_integrand(state_.t, uxt_l2 * uxt_l2);
    accumulator_.fill(row);
    row.clipping_count = static_cast<double>(stepper_.clip_events());
    record_.rows.push_back(row);
}

std::vector<double> sample_times(const SchemeConfig& scheme) {
    if (scheme.end_time == 0.0) return {0.0};
    std::vector<double> ts(static_cast<std::size_t>(scheme.samples) + 1);
    for (std::size_t k = 0; k < ts.size(); ++k)
        ts[k] = scheme.end_time * static_cast<double>(k) / static_cast<double>(scheme.samples);
    ts.back() = scheme.end_time;
    return ts;
}

void integrate_lockstep(std::span<Simulation* const> sims, const SchemeConfig& scheme,
                        const std::function<void(double)>& on_step) {
    if (sims.empty()) return;
    const auto times = sample_times(scheme);
    for (Simulation* s : sims) s->take_sample();
    std::size_t next = 1;
    while (next < times.size()) {
        const double t = sims.front()->state().t;
        const double remaining = times[next] - t;
        double dt = sims.front()->stable_dt();
        double t_end = t + dt;
        bool hits_sample = false;
        if (dt >= remaining) {
            dt = remaining;
            t_end = times[next];
            hits_sample = true;
        }
        for (Simulation* s : sims) s->advance(dt, t_end);
        if (on_step) on_step(dt);
        if (hits_sample) {
            for (Simulation* s : sims) s->take_sample();
            ++next;
        }
    }
}

RunResult run(const ScenarioSpec& scenario, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
              Mode mode, const RunMonitors& monitors) {
    auto bad = scheme.violations();
    if (!bad.empty()) throw DomainError("invalid scheme: " + bad.front());
    Simulation sim(params, scheme, grid, mode, build_initial_state(scenario, params, grid), monitors.config_tag,
                   monitors.boundary_check);
    Simulation* sims[] = {&sim};
    integrate_lockstep(sims, scheme);
    return {sim.state(), sim.record(), sim.clip_events()};
}

}  // namespace mhd1d
