#include "mhd1d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mhd1d/manufactured.hpp"
#include "mhd1d/run.hpp"
#include "mhd1d/scenario.hpp"

namespace mhd1d {

bool PotentialBounds::valid() const {
    for (double c : {c1, c2, C1, C2})
        if (!(c > 0.0) || !std::isfinite(c)) return false;
    return c1 <= c2;
}

PotentialBounds potential_energy_bounds(double gamma, double rho_bar, std::size_t samples) {
    PotentialBounds out;
    out.c1 = std::numeric_limits<double>::infinity();
    // Near rho_bar both sides vanish quadratically; skip the cancellation zone.
    const double skip = 1e-3 * rho_bar;
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = 2.0 * rho_bar * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double d = r - rho_bar;
        if (std::abs(d) < skip) continue;
        const double ratio = potential_energy(r, gamma, rho_bar) / (d * d);
        out.c1 = std::min(out.c1, ratio);
        out.c2 = std::max(out.c2, ratio);
    }
    std::vector<double> lhs(samples), mid(samples), phi(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = rho_bar * (2.0 + 8.0 * static_cast<double>(k + 1) / static_cast<double>(samples));
        lhs[k] = std::pow(r, gamma) - std::pow(rho_bar, gamma);
        mid[k] = std::pow(r - rho_bar, gamma);
        phi[k] = potential_energy(r, gamma, rho_bar);
        out.C1 = std::max(out.C1, lhs[k] / mid[k]);
    }
    for (std::size_t k = 0; k < samples; ++k) out.C2 = std::max(out.C2, out.C1 * mid[k] / phi[k]);
    return out;
}

double potential_convexity_margin(double gamma, double rho_bar, std::size_t samples) {
    const double h = 10.0 * rho_bar / static_cast<double>(samples - 1);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < samples; ++k) {
        const double r = h * static_cast<double>(k);
        const double d2 = potential_energy(r - h, gamma, rho_bar) - 2.0 * potential_energy(r, gamma, rho_bar) +
                          potential_energy(r + h, gamma, rho_bar);
        margin = std::min(margin, d2 / (h * h));
    }
    return margin;
}

double steady_state_residual(const PhysParams& params, const SchemeConfig& scheme, const Grid1D& grid, Mode mode) {
    State s(grid.size());
    std::fill(s.rho.begin(), s.rho.end(), params.rho_bar);
    std::fill(s.b.begin(), s.b.end(), params.b_bar);
    const RhsOutput r = rhs(s, params, scheme, grid, mode);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sup = std::max({sup, std::abs(r.drho[i]), std::abs(r.dmom[i]), std::abs(r.db[i])});
    return sup;
}

double relative_mass_defect(const State& initial, const State& final_state, const PhysParams& params,
                            const Grid1D& grid) {
    double defect = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        defect += final_state.rho[i] - initial.rho[i];
        l1 += std::abs(initial.rho[i] - params.rho_bar);
    }
    return std::abs(defect) / l1;
}

double energy_budget_drift(const DiagnosticsRecord& record) {
    if (record.rows.empty()) return 0.0;
    const auto budget = [](const DiagnosticsRow& r) { return r.energy + r.diss_u + r.diss_b; };
    const double scale = budget(record.rows.front());
    double running_min = scale;
    double drift = 0.0;
    for (const auto& row : record.rows) {
        const double v = budget(row);
        drift = std::max(drift, v - running_min);
        running_min = std::min(running_min, v);
    }
    return scale > 0.0 ? drift / scale : drift;
}

FluxIdentityStudy flux_identity_study(const PhysParams& params, const SchemeConfig& scheme, std::size_t n_coarse,
                                      double t, double half_width) {
    const Manufactured mf = gaussian_manufactured(params);
    auto residual = [&](std::size_t n) {
        const Grid1D grid(half_width, n);
        const State s = sample_manufactured(mf, grid, t);
        return flux_identity_residual(s, rhs(s, params, scheme, grid, Mode::Resistive), params, grid);
    };
    return {residual(n_coarse), residual(2 * n_coarse)};
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::vector<CheckResult> run_verification(const std::function<void(const CheckResult&)>& on_result) {
    std::vector<CheckResult> results;
    auto add = [&](std::string name, bool passed, std::string detail) {
        results.push_back({std::move(name), passed, std::move(detail)});
        if (on_result) on_result(results.back());
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& ex) {
            add(name, false, std::string("exception: ") + ex.what());
        }
    };

    guarded("potential_energy_bounds", [&] {
        bool ok = true;
        std::string detail;
        for (double gamma : {1.4, 2.0, 3.0})
            for (double rho_bar : {1.0, 2.0}) {
                const auto c = potential_energy_bounds(gamma, rho_bar);
                ok = ok && c.valid();
                detail += "g=" + fmt(gamma) + ",rb=" + fmt(rho_bar) + ":[" + fmt(c.c1) + "," + fmt(c.c2) + "," +
                          fmt(c.C1) + "," + fmt(c.C2) + "] ";
            }
        add("potential_energy_bounds", ok, detail);
    });

    guarded("potential_energy_convexity", [&] {
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        for (double gamma : {1.4, 2.0, 3.0})
            for (double rho_bar : {1.0, 2.0}) {
                const double m = potential_convexity_margin(gamma, rho_bar);
                worst = std::min(worst, m);
                ok = ok && m > 0.0 && potential_energy(rho_bar, gamma, rho_bar) == 0.0;
            }
        add("potential_energy_convexity", ok, "min second difference / h^2 = " + fmt(worst));
    });

    guarded("steady_state", [&] {
        double worst = 0.0, tol = 0.0;
        bool ok = true;
        for (auto rec : {Reconstruction::MusclMinmod, Reconstruction::FirstOrderUpwind})
            for (auto mode : {Mode::Resistive, Mode::NonResistive})
                for (auto [rb, bb] : {std::pair{1.0, 1.0}, std::pair{2.0, -3.0}}) {
                    PhysParams p;
                    p.nu = 1e-2;
                    p.rho_bar = rb;
                    p.b_bar = bb;
                    SchemeConfig s;
                    s.reconstruction = rec;
                    const double r = steady_state_residual(p, s, Grid1D(20.0, 512), mode);
                    tol = 1e-13 * std::max({rb, std::abs(bb), 1.0});
                    worst = std::max(worst, r);
                    ok = ok && r < tol;
                }
        add("steady_state", ok, "max tendency " + fmt(worst));
    });

    guarded("mode_consistency", [&] {
        PhysParams p;
        p.nu = 0.0;
        SchemeConfig s;
        const Grid1D g(20.0, 256);
        const State s0 = build_initial_state(ScenarioSpec{}, p, g);
        State a = s0, b = s0;
        for (int k = 0; k < 20; ++k) {
            const double dt = stable_dt(a, p, s, g);
            a = step(a, dt, p, s, g, Mode::Resistive);
            b = step(b, dt, p, s, g, Mode::NonResistive);
        }
        const bool ok = a.rho == b.rho && a.mom == b.mom && a.b == b.b;
        add("mode_consistency", ok, ok ? "resistive at nu=0 matches non_resistive bitwise" : "states differ");
    });

    RunResult standard;
    PhysParams standard_params;
    standard_params.nu = 1e-3;
    const Grid1D standard_grid(20.0, 2048);
    guarded("standard_run", [&] {
        standard = run(ScenarioSpec{}, standard_params, SchemeConfig{}, standard_grid, Mode::Resistive);
    });
    if (!standard.record.rows.empty()) {
        const State s0 = build_initial_state(ScenarioSpec{}, standard_params, standard_grid);
        const double m = relative_mass_defect(s0, standard.final_state, standard_params, standard_grid);
        add("mass_conservation", m <= 1e-8, "relative mass defect " + fmt(m));
        const double drift = energy_budget_drift(standard.record);
        add("energy_inequality", drift <= 1e-3, "relative drift of E + D_u + D_b " + fmt(drift));
    }

    guarded("mms_order", [&] {
        PhysParams p;
        p.nu = 1e-3;
        SchemeConfig s;
        s.end_time = 0.5;
        const auto muscl = mms_order_study(p, s, {512, 1024, 2048});
        s.reconstruction = Reconstruction::FirstOrderUpwind;
        const auto upwind = mms_order_study(p, s, {512, 1024, 2048});
        const bool ok = muscl.min_order() >= 1.8 && upwind.min_order() >= 0.9;
        add("mms_order", ok,
            "muscl " + fmt(muscl.order[0]) + "/" + fmt(muscl.order[1]) + "/" + fmt(muscl.order[2]) + ", upwind " +
                fmt(upwind.order[0]) + "/" + fmt(upwind.order[1]) + "/" + fmt(upwind.order[2]));
    });

    guarded("flux_identity_two_grid", [&] {
        PhysParams p;
        p.nu = 1e-3;
        const auto f = flux_identity_study(p, SchemeConfig{}, 1024);
        add("flux_identity_two_grid", f.contraction() >= 3.5,
            "residual " + fmt(f.coarse) + " -> " + fmt(f.fine) + ", contraction " + fmt(f.contraction()));
    });

    return results;
}

}  // namespace mhd1d
