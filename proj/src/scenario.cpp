#include "mhd1d/scenario.hpp"

#include <cmath>
#include <sstream>

namespace mhd1d {

std::string to_string(Preset p) {
    switch (p) {
        case Preset::GaussianBump: return "gaussian_bump";
        case Preset::InteriorVacuum: return "interior_vacuum";
        case Preset::Custom: return "custom";
    }
    return "unknown";
}

Preset preset_from_string(const std::string& name) {
    if (name == "gaussian_bump") return Preset::GaussianBump;
    if (name == "interior_vacuum") return Preset::InteriorVacuum;
    if (name == "custom") return Preset::Custom;
    throw DomainError("unknown scenario preset '" + name + "'");
}

std::vector<std::string> ScenarioSpec::violations(const PhysParams& params) const {
    std::vector<std::string> out;
    if (!(sigma > 0.0) || !std::isfinite(sigma)) out.emplace_back("sigma > 0");
    if (preset == Preset::GaussianBump && !(a_rho > -params.rho_bar))
        out.emplace_back("a_rho > -rho_bar");
    if (!std::isfinite(a_u) || !std::isfinite(a_b) || !std::isfinite(a_rho))
        out.emplace_back("amplitudes finite");
    if (preset == Preset::Custom) {
        if (custom_rho.size() != custom_u.size() || custom_rho.size() != custom_b.size() || custom_rho.empty())
            out.emplace_back("custom fields have equal nonzero length");
        for (double r : custom_rho)
            if (!(r >= 0.0)) {
                out.emplace_back("custom rho >= 0");
                break;
            }
    }
    return out;
}

State build_initial_state(const ScenarioSpec& spec, const PhysParams& params, const Grid1D& grid) {
    auto bad = spec.violations(params);
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario:";
        for (const auto& s : bad) msg << " [" << s << "]";
        throw DomainError(msg.str());
    }
    const std::size_t n = grid.size();
    State s(n);
    if (spec.preset == Preset::Custom) {
        if (spec.custom_rho.size() != n) throw DomainError("custom fields do not match n_cells");
        for (std::size_t i = 0; i < n; ++i) {
            s.rho[i] = spec.custom_rho[i];
            s.mom[i] = spec.custom_rho[i] * spec.custom_u[i];
            s.b[i] = spec.custom_b[i];
        }
        return s;
    }
    if (grid.half_width() < 5.0 * spec.sigma)
        throw DomainError("domain too small: need half_width >= 5 sigma");

    const double inv_s2 = 1.0 / (spec.sigma * spec.sigma);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double g = std::exp(-x * x * inv_s2);
        double rho = 0.0;
        if (spec.preset == Preset::GaussianBump) {
            rho = params.rho_bar + spec.a_rho * g;
        } else {
            const double h = 1.0 - g;
            rho = params.rho_bar * h * h;
        }
        const double u = spec.a_u * x * g;
        s.rho[i] = rho;
        s.mom[i] = rho * u;
        s.b[i] = params.b_bar + spec.a_b * g;
    }
    return s;
}

double trapezoid(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n == 0) return 0.0;
    if (n == 1) return 0.0;
    double sum = 0.5 * (f[0] + f[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
    return sum * dx;
}

double weighted_moment_check(const State& state0, const PhysParams& params, const Grid1D& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = state0.rho[i];
        const double u = state0.mom[i] / safe_density(rho);
        const double db = state0.b[i] - params.b_bar;
        const double e = 0.5 * rho * u * u + potential_energy(rho, params.gamma, params.rho_bar) + 0.5 * db * db;
        w[i] = e * std::pow(std::abs(grid.x(i)), params.alpha);
    }
    return trapezoid(w, grid.dx());
}

CompatibilityResult compatibility_residual(const State& state0, const PhysParams& params, const Grid1D& grid) {
    const std::size_t n = grid.size();
    const auto u = velocity(state0);
    const auto ux = ddx(u, grid.dx());
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = params.mu * ux[i] - std::pow(state0.rho[i], params.gamma) - 0.5 * state0.b[i] * state0.b[i];
    const auto h = ddx(q, grid.dx());

    CompatibilityResult out{FieldScalar(std::vector<double>(n, 0.0), grid), 0.0, {}};
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (state0.rho[i] > kCompatDensity) {
            out.g[i] = h[i] / std::sqrt(state0.rho[i]);
            sum += out.g[i] * out.g[i];
        } else {
            out.flagged.push_back(i);
        }
    }
    out.g_l2 = std::sqrt(sum * grid.dx());
    return out;
}

}  // namespace mhd1d
