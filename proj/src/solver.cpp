#include "mhd1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mhd1d {

std::string to_string(Reconstruction r) {
    return r == Reconstruction::FirstOrderUpwind ? "first_order_upwind" : "muscl_minmod";
}
std::string to_string(TimeIntegrator t) { return t == TimeIntegrator::SspRk2 ? "ssp_rk2" : "ssp_rk3"; }
std::string to_string(Mode m) { return m == Mode::Resistive ? "resistive" : "non_resistive"; }

Reconstruction reconstruction_from_string(const std::string& s) {
    if (s == "first_order_upwind") return Reconstruction::FirstOrderUpwind;
    if (s == "muscl_minmod") return Reconstruction::MusclMinmod;
    throw DomainError("unknown reconstruction '" + s + "'");
}
TimeIntegrator integrator_from_string(const std::string& s) {
    if (s == "ssp_rk2") return TimeIntegrator::SspRk2;
    if (s == "ssp_rk3") return TimeIntegrator::SspRk3;
    throw DomainError("unknown time integrator '" + s + "'");
}
Mode mode_from_string(const std::string& s) {
    if (s == "resistive") return Mode::Resistive;
    if (s == "non_resistive") return Mode::NonResistive;
    throw DomainError("unknown mode '" + s + "'");
}

std::vector<std::string> SchemeConfig::violations() const {
    std::vector<std::string> out;
    if (!(cfl_number > 0.0 && cfl_number <= 1.0)) out.emplace_back("0 < cfl_number <= 1");
    if (!(diffusion_number > 0.0 && diffusion_number <= 0.5)) out.emplace_back("0 < diffusion_number <= 0.5");
    if (!(end_time >= 0.0) || !std::isfinite(end_time)) out.emplace_back("end_time >= 0");
    if (samples < 1) out.emplace_back("samples >= 1");
    if (!(tvb_constant >= 0.0) || !std::isfinite(tvb_constant)) out.emplace_back("tvb_constant >= 0");
    return out;
}

namespace {

constexpr std::size_t kGhost = 2;

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

inline double minmod(double a, double b, double c) { return minmod(a, minmod(b, c)); }

/// TVB-corrected generalized minmod, minmod(central, 2 left, 2 right), with
/// the central slope kept wherever it is below the TVB threshold.
inline double tvb_minmod(double left, double right, double threshold) {
    const double central = 0.5 * (left + right);
    if (std::abs(central) <= threshold) return central;
    return minmod(central, 2.0 * left, 2.0 * right);
}

struct Primitive {
    double rho, u, b;
};

struct Flux {
    double rho, mom, b;
};

inline Flux physical_flux(const Primitive& q, double gamma) {
    const double m = q.rho * q.u;
    return {m, m * q.u + std::pow(q.rho, gamma) + 0.5 * q.b * q.b, q.u * q.b};
}

inline Flux llf_flux(const Primitive& l, const Primitive& r, double gamma) {
    const Flux fl = physical_flux(l, gamma);
    const Flux fr = physical_flux(r, gamma);
    const double a = std::max(fast_speed(l.rho, l.u, l.b, gamma), fast_speed(r.rho, r.u, r.b, gamma));
    return {0.5 * (fl.rho + fr.rho) - 0.5 * a * (r.rho - l.rho),
            0.5 * (fl.mom + fr.mom) - 0.5 * a * (r.rho * r.u - l.rho * l.u),
            0.5 * (fl.b + fr.b) - 0.5 * a * (r.b - l.b)};
}

void compute_rhs(const State& s, const PhysParams& p, const SchemeConfig& scheme, const Grid1D& grid, Mode mode,
                 RhsOutput& out) {
    const std::size_t n = s.size();
    const std::size_t ne = n + 2 * kGhost;
    const double dx = grid.dx();

    // Primitive variables with ghost nodes holding the far-field state.
    std::vector<double> rho(ne, p.rho_bar), u(ne, 0.0), b(ne, p.b_bar);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i + kGhost] = s.rho[i];
        u[i + kGhost] = s.mom[i] / safe_density(s.rho[i]);
        b[i + kGhost] = s.b[i];
    }

    std::vector<double> sr(ne, 0.0), su(ne, 0.0), sb(ne, 0.0);
    if (scheme.reconstruction == Reconstruction::MusclMinmod) {
        const double tvb = scheme.tvb_constant * dx * dx;
        for (std::size_t j = 1; j + 1 < ne; ++j) {
            sr[j] = tvb_minmod(rho[j] - rho[j - 1], rho[j + 1] - rho[j], tvb);
            su[j] = tvb_minmod(u[j] - u[j - 1], u[j + 1] - u[j], tvb);
            sb[j] = tvb_minmod(b[j] - b[j - 1], b[j + 1] - b[j], tvb);
            // Face densities stay non-negative.
            sr[j] = std::clamp(sr[j], -2.0 * rho[j], 2.0 * rho[j]);
        }
    }

    // Face f sits between extended nodes f + 1 and f + 2, i.e. interior f - 1 and f.
    std::vector<Flux> face(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
        const std::size_t jl = f + 1, jr = f + 2;
        const Primitive l{rho[jl] + 0.5 * sr[jl], u[jl] + 0.5 * su[jl], b[jl] + 0.5 * sb[jl]};
        const Primitive r{rho[jr] - 0.5 * sr[jr], u[jr] - 0.5 * su[jr], b[jr] - 0.5 * sb[jr]};
        face[f] = llf_flux(l, r, p.gamma);
    }

    const double inv_dx = 1.0 / dx;
    const double inv_dx2 = inv_dx * inv_dx;
    const double nu = mode == Mode::Resistive ? p.nu : 0.0;
    out.drho.resize(n);
    out.dmom.resize(n);
    out.db.resize(n);
    out.u_t.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + kGhost;
        out.drho[i] = -(face[i + 1].rho - face[i].rho) * inv_dx;
        out.dmom[i] = -(face[i + 1].mom - face[i].mom) * inv_dx + p.mu * (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dx2;
        out.db[i] = -(face[i + 1].b - face[i].b) * inv_dx;
        if (nu != 0.0) out.db[i] += nu * (b[j + 1] - 2.0 * b[j] + b[j - 1]) * inv_dx2;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(out.drho[i]) || !std::isfinite(out.dmom[i]) || !std::isfinite(out.db[i])) {
            std::ostringstream msg;
            msg << "non-finite tendency at node " << i << " (x = " << grid.x(i) << ", t = " << s.t << ")";
            throw NumericalError(msg.str());
        }
    }
}

void add_sources(const State& s, const PhysParams& p, const Grid1D& grid, Mode mode, const Manufactured& mf,
                 RhsOutput& out) {
    const RhsOutput src = mms_sources(p, grid, mode, mf, s.t);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.drho[i] += src.drho[i];
        out.dmom[i] += src.dmom[i];
        out.db[i] += src.db[i];
    }
}

void fill_u_t(const State& s, RhsOutput& out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = safe_density(s.rho[i]);
        out.u_t[i] = (out.dmom[i] - (s.mom[i] / r) * out.drho[i]) / r;
    }
}

}  // namespace

RhsOutput rhs(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
              Mode mode) {
    RhsOutput out(state.size());
    compute_rhs(state, params, scheme, grid, mode, out);
    fill_u_t(state, out);
    return out;
}

RhsOutput mms_sources(const PhysParams& p, const Grid1D& grid, Mode mode, const Manufactured& mf, double t) {
    const std::size_t n = grid.size();
    RhsOutput src(n);
    const double nu = mode == Mode::Resistive ? p.nu : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const ManufacturedPoint q = mf(grid.x(i), t);
        const double m_t = q.rho_t * q.u + q.rho * q.u_t;
        src.drho[i] = q.rho_t + q.rho_x * q.u + q.rho * q.u_x;
        src.dmom[i] = m_t + q.rho_x * q.u * q.u + 2.0 * q.rho * q.u * q.u_x +
                      p.gamma * std::pow(q.rho, p.gamma - 1.0) * q.rho_x + q.b * q.b_x - p.mu * q.u_xx;
        src.db[i] = q.b_t + q.u_x * q.b + q.u * q.b_x - nu * q.b_xx;
    }
    return src;
}

RhsOutput mms_rhs(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
                  Mode mode, const Manufactured& manufactured) {
    RhsOutput out(state.size());
    compute_rhs(state, params, scheme, grid, mode, out);
    add_sources(state, params, grid, mode, manufactured, out);
    fill_u_t(state, out);
    return out;
}

State sample_manufactured(const Manufactured& manufactured, const Grid1D& grid, double t) {
    State s(grid.size());
    s.t = t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ManufacturedPoint q = manufactured(grid.x(i), t);
        s.rho[i] = q.rho;
        s.mom[i] = q.rho * q.u;
        s.b[i] = q.b;
    }
    return s;
}

double stable_dt(const State& state, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid) {
    double max_speed = 0.0;
    double min_rho = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double u = state.mom[i] / safe_density(state.rho[i]);
        max_speed = std::max(max_speed, fast_speed(state.rho[i], u, state.b[i], params.gamma));
        min_rho = std::min(min_rho, safe_density(state.rho[i]));
    }
    // Ghost nodes carry the far-field state.
    max_speed = std::max(max_speed, fast_speed(params.rho_bar, 0.0, params.b_bar, params.gamma));
    min_rho = std::min(min_rho, params.rho_bar);

    const double dx = grid.dx();
    const double dt_adv = scheme.cfl_number * dx / max_speed;
    const double diffusivity = std::max(params.mu / min_rho, params.nu);
    const double dt_diff = diffusivity > 0.0 ? scheme.diffusion_number * dx * dx / diffusivity
                                             : std::numeric_limits<double>::infinity();
    return std::min(dt_adv, dt_diff);
}

Stepper::Stepper(PhysParams params, SchemeConfig scheme, Grid1D grid, Mode mode, const Manufactured* manufactured)
    : params_(params), scheme_(scheme), grid_(grid), mode_(mode), manufactured_(manufactured), k_(grid.size()) {}

void Stepper::evaluate(const State& s, RhsOutput& out) const {
    compute_rhs(s, params_, scheme_, grid_, mode_, out);
    if (manufactured_ != nullptr) add_sources(s, params_, grid_, mode_, *manufactured_, out);
}

void Stepper::finish_stage(State& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.rho[i] < 0.0) {
            s.rho[i] = 0.0;
            ++clip_events_;
        }
        if (!std::isfinite(s.rho[i]) || !std::isfinite(s.mom[i]) || !std::isfinite(s.b[i])) {
            std::ostringstream msg;
            msg << "non-finite state at node " << i << " at t = " << s.t;
            throw NumericalError(msg.str());
        }
    }
}

State Stepper::step(const State& s0, double dt) {
    const std::size_t n = s0.size();
    auto euler = [&](const State& s, double h) {
        evaluate(s, k_);
        State r(n);
        for (std::size_t i = 0; i < n; ++i) {
            r.rho[i] = s.rho[i] + h * k_.drho[i];
            r.mom[i] = s.mom[i] + h * k_.dmom[i];
            r.b[i] = s.b[i] + h * k_.db[i];
        }
        return r;
    };
    auto blend = [n](const State& a, double wa, State& b, double wb) {
        for (std::size_t i = 0; i < n; ++i) {
            b.rho[i] = wa * a.rho[i] + wb * b.rho[i];
            b.mom[i] = wa * a.mom[i] + wb * b.mom[i];
            b.b[i] = wa * a.b[i] + wb * b.b[i];
        }
    };

    State s1 = euler(s0, dt);
    s1.t = s0.t + dt;
    finish_stage(s1);
    if (scheme_.integrator == TimeIntegrator::SspRk2) {
        State s2 = euler(s1, dt);
        blend(s0, 0.5, s2, 0.5);
        s2.t = s0.t + dt;
        finish_stage(s2);
        return s2;
    }
    State s2 = euler(s1, dt);
    blend(s0, 0.75, s2, 0.25);
    s2.t = s0.t + 0.5 * dt;
    finish_stage(s2);
    State s3 = euler(s2, dt);
    blend(s0, 1.0 / 3.0, s3, 2.0 / 3.0);
    s3.t = s0.t + dt;
    finish_stage(s3);
    return s3;
}

State step(const State& state, double dt, const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid,
           Mode mode, std::size_t* clip_events) {
    Stepper stepper(params, scheme, grid, mode);
    State next = stepper.step(state, dt);
    if (clip_events != nullptr) *clip_events += stepper.clip_events();
    return next;
}

double boundary_deviation(const State& s, const PhysParams& p) {
    const std::size_t n = s.size();
    const std::size_t k = std::min<std::size_t>(3, n);
    double dev = 0.0;
    auto probe = [&](std::size_t i) {
        dev = std::max({dev, std::abs(s.rho[i] - p.rho_bar), std::abs(s.mom[i]), std::abs(s.b[i] - p.b_bar)});
    };
    for (std::size_t i = 0; i < k; ++i) {
        probe(i);
        probe(n - 1 - i);
    }
    return dev;
}

void write_checkpoint(std::ostream& os, const State& state, const Grid1D& grid) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu %.16e %.16e\n", grid.size(), grid.half_width(), state.t);
    os << buf;
    for (std::size_t i = 0; i < state.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e %.16e\n", grid.x(i), state.rho[i], state.mom[i],
                      state.b[i]);
        os << buf;
    }
}

State read_checkpoint(std::istream& is, Grid1D* grid_out) {
    std::size_t n = 0;
    double half_width = 0.0, t = 0.0;
    if (!(is >> n >> half_width >> t)) throw DomainError("checkpoint: malformed header");
    Grid1D grid(half_width, n);
    State s(n);
    s.t = t;
    for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0;
        if (!(is >> x >> s.rho[i] >> s.mom[i] >> s.b[i]))
            throw DomainError("checkpoint: truncated at row " + std::to_string(i));
    }
    if (grid_out != nullptr) *grid_out = grid;
    return s;
}

}  // namespace mhd1d
