#include "mhd1d/core.hpp"

#include <cmath>
#include <sstream>

namespace mhd1d {

Grid1D::Grid1D(double half_width, std::size_t n_cells)
    : half_width_(half_width), n_cells_(n_cells), dx_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw DomainError("grid half_width must be positive and finite");
    if (n_cells < 4) throw DomainError("grid needs at least 4 cells");
    dx_ = 2.0 * half_width / static_cast<double>(n_cells);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> xs(n_cells_);
    for (std::size_t i = 0; i < n_cells_; ++i) xs[i] = x(i);
    return xs;
}

std::vector<std::string> PhysParams::violations() const {
    std::vector<std::string> out;
    if (!(mu > 0.0) || !std::isfinite(mu)) out.emplace_back("mu > 0");
    if (!(nu >= 0.0) || !std::isfinite(nu)) out.emplace_back("nu >= 0");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) out.emplace_back("gamma > 1");
    if (!(rho_bar >= 1.0) || !std::isfinite(rho_bar)) out.emplace_back("rho_bar >= 1");
    if (b_bar == 0.0 || !std::isfinite(b_bar)) out.emplace_back("b_bar != 0");
    if (!(alpha > 1.0 && alpha <= 2.0)) out.emplace_back("1 < α ≤ 2");
    return out;
}

void PhysParams::validate() const {
    auto v = violations();
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid physical parameters:";
    for (const auto& s : v) msg << " [" << s << "]";
    throw DomainError(msg.str());
}

void State::check(const Grid1D& grid) const {
    const std::size_t n = grid.size();
    if (rho.size() != n || mom.size() != n || b.size() != n)
        throw DomainError("state arrays do not match grid size");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho[i] >= 0.0) || !std::isfinite(rho[i]))
            throw DomainError("invalid density at node " + std::to_string(i));
        if (!std::isfinite(mom[i]) || !std::isfinite(b[i]))
            throw DomainError("non-finite field at node " + std::to_string(i));
    }
}

FieldScalar::FieldScalar(std::vector<double> v, const Grid1D& g) : values(std::move(v)), grid(&g) {
    if (values.size() != g.size()) throw DomainError("field length does not match grid");
}

double pressure(double rho, double gamma) {
    if (!(rho >= 0.0)) throw DomainError("pressure: negative density");
    return std::pow(rho, gamma);
}

double potential_energy(double rho, double gamma, double rho_bar) {
    if (!(rho >= 0.0)) throw DomainError("potential_energy: negative density");
    const double p_bar = std::pow(rho_bar, gamma);
    const double dp_bar = gamma * std::pow(rho_bar, gamma - 1.0);
    const double phi = (std::pow(rho, gamma) - p_bar - dp_bar * (rho - rho_bar)) / (gamma - 1.0);
    // Convex with minimum 0 at rho_bar; cancellation can leave a tiny negative.
    return phi > 0.0 ? phi : 0.0;
}

std::vector<double> ddx(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    const double inv2 = 0.5 / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
    return d;
}

std::vector<double> d2dx2(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 4) return d;
    const double inv = 1.0 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return d;
}

std::vector<double> velocity(const State& state) {
    std::vector<double> u(state.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = state.mom[i] / safe_density(state.rho[i]);
    return u;
}

FieldScalar pressure(const FieldScalar& rho, double gamma) {
    std::vector<double> p(rho.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = pressure(rho[i], gamma);
    return {std::move(p), *rho.grid};
}

FieldScalar potential_energy(const FieldScalar& rho, double gamma, double rho_bar) {
    std::vector<double> phi(rho.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = potential_energy(rho[i], gamma, rho_bar);
    return {std::move(phi), *rho.grid};
}

FieldScalar effective_viscous_flux(const State& state, const PhysParams& params, const Grid1D& grid) {
    const auto u = velocity(state);
    const auto ux = ddx(u, grid.dx());
    const double p_bar = std::pow(params.rho_bar, params.gamma);
    const double bb2 = params.b_bar * params.b_bar;
    std::vector<double> f(state.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = params.mu * ux[i] -
               (std::pow(state.rho[i], params.gamma) - p_bar + 0.5 * (state.b[i] * state.b[i] - bb2));
    }
    return {std::move(f), grid};
}

FieldScalar material_derivative(const State& state, const FieldScalar& u_t, const Grid1D& grid) {
    if (u_t.size() != state.size()) throw DomainError("material_derivative: u_t length mismatch");
    const auto u = velocity(state);
    const auto ux = ddx(u, grid.dx());
    std::vector<double> ud(u.size());
    for (std::size_t i = 0; i < ud.size(); ++i) ud[i] = u_t[i] + u[i] * ux[i];
    return {std::move(ud), grid};
}

double fast_speed(double rho, double u, double b, double gamma) {
    const double r = safe_density(rho);
    return std::abs(u) + std::sqrt(gamma * std::pow(r, gamma - 1.0) + b * b / r);
}

FieldScalar fast_speed(const State& state, const PhysParams& params, const Grid1D& grid) {
    std::vector<double> c(state.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double u = state.mom[i] / safe_density(state.rho[i]);
        c[i] = fast_speed(state.rho[i], u, state.b[i], params.gamma);
    }
    return {std::move(c), grid};
}

}  // namespace mhd1d
