#include "mhd1d/limit_study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "mhd1d/run.hpp"

namespace mhd1d {

RateFit fit_rate(std::span<const double> nu_values, std::span<const double> errors) {
    if (nu_values.size() != errors.size()) throw DomainError("fit_rate: size mismatch");
    if (nu_values.size() < 3) throw DomainError("fit_rate: need at least 3 points");
    const std::size_t n = nu_values.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(nu_values[i] > 0.0)) throw DomainError("fit_rate: nu must be positive");
        if (!(errors[i] > 0.0)) throw DomainError("fit_rate: errors must be positive (degenerate sweep)");
        lx[i] = std::log(nu_values[i]);
        ly[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit_rate: nu values must not all coincide");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

namespace {

double sq_l2_diff(std::span<const double> a, std::span<const double> b, const Grid1D& grid) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s * grid.dx();
}

}  // namespace

PairRecord run_pair(double nu, const PairConfig& config) {
    if (!(nu >= 0.0)) throw DomainError("run_pair: nu must be non-negative");
    PhysParams params = config.params;
    params.nu = nu;
    const Grid1D grid = config.grid();
    const State init = build_initial_state(config.scenario, params, grid);

    Simulation resistive(params, config.scheme, grid, Mode::Resistive, init, config.config_tag);
    Simulation ideal(params, config.scheme, grid, Mode::NonResistive, init, config.config_tag);

    PairRecord rec;
    rec.nu = nu;
    double last_diss_integrand = 0.0;
    auto track = [&](double dt) {
        const State& a = resistive.state();
        const State& b = ideal.state();
        const auto ua = velocity(a);
        const auto ub = velocity(b);
        const double er = sq_l2_diff(a.rho, b.rho, grid);
        const double eu = sq_l2_diff(ua, ub, grid);
        const double eb = sq_l2_diff(a.b, b.b, grid);
        rec.e_sup = std::max(rec.e_sup, er + eu + eb);
        rec.e_sup_rho = std::max(rec.e_sup_rho, er);
        rec.e_sup_u = std::max(rec.e_sup_u, eu);
        rec.e_sup_b = std::max(rec.e_sup_b, eb);
        const auto dxa = ddx(ua, grid.dx());
        const auto dxb = ddx(ub, grid.dx());
        const double integrand = params.mu * sq_l2_diff(dxa, dxb, grid);
        rec.e_diss += 0.5 * dt * (last_diss_integrand + integrand);
        last_diss_integrand = integrand;
    };
    // Both systems start from identical data, so every difference is 0 at t = 0.
    Simulation* sims[] = {&resistive, &ideal};
    integrate_lockstep(sims, config.scheme, track);

    rec.e_total = rec.e_sup + rec.e_diss;
    rec.diagnostics = resistive.record();
    rec.aux = rec.diagnostics.rows.back().nu_bx_l2_sq_int;
    rec.clip_events = resistive.clip_events() + ideal.clip_events();
    return rec;
}

double discretization_proxy(const PairConfig& config) {
    PairConfig fine = config;
    fine.n_cells = 2 * config.n_cells;
    PhysParams params = config.params;
    params.nu = 0.0;
    const Grid1D gc = config.grid();
    const Grid1D gf = fine.grid();
    Simulation coarse(params, config.scheme, gc, Mode::NonResistive, build_initial_state(config.scenario, params, gc));
    Simulation refined(params, config.scheme, gf, Mode::NonResistive, build_initial_state(config.scenario, params, gf));

    // Separate time loops: each grid follows its own stability bound but both
    // stop at the same sample times.
    std::vector<State> coarse_samples, fine_samples;
    auto collect = [&](Simulation& sim, std::vector<State>& out) {
        const auto times = sample_times(config.scheme);
        out.push_back(sim.state());
        for (std::size_t k = 1; k < times.size(); ++k) {
            while (sim.state().t < times[k]) {
                const double remaining = times[k] - sim.state().t;
                const double dt = sim.stable_dt();
                if (dt >= remaining)
                    sim.advance(remaining, times[k]);
                else
                    sim.advance(dt, sim.state().t + dt);
            }
            out.push_back(sim.state());
        }
    };
    collect(coarse, coarse_samples);
    collect(refined, fine_samples);

    double proxy = 0.0;
    for (std::size_t k = 0; k < coarse_samples.size(); ++k) {
        const State& c = coarse_samples[k];
        const State& f = fine_samples[k];
        const auto uc = velocity(c);
        const auto uf = velocity(f);
        const std::size_t n = c.size();
        std::vector<double> r(n), u(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = 0.5 * (f.rho[2 * i] + f.rho[2 * i + 1]);
            u[i] = 0.5 * (uf[2 * i] + uf[2 * i + 1]);
            b[i] = 0.5 * (f.b[2 * i] + f.b[2 * i + 1]);
        }
        const double e = sq_l2_diff(c.rho, r, gc) + sq_l2_diff(uc, u, gc) + sq_l2_diff(c.b, b, gc);
        proxy = std::max(proxy, e);
    }
    return proxy;
}

void finalize_report(ConvergenceReport& rep) {
    rep.fit.reset();
    rep.fit_u.reset();
    rep.fit_aux.reset();
    rep.degenerate = false;
    rep.fit_note.clear();

    std::vector<double> nu, total, u_err, aux;
    for (const auto& e : rep.entries) {
        if (!e.ok) continue;
        nu.push_back(e.nu);
        total.push_back(e.e_total);
        u_err.push_back(e.e_sup_u);
        aux.push_back(e.aux);
    }
    const bool all_positive = std::all_of(total.begin(), total.end(), [](double v) { return v > 0.0; }) &&
                              std::all_of(nu.begin(), nu.end(), [](double v) { return v > 0.0; });
    if (nu.size() < 3) {
        rep.fit_note = "fit skipped: fewer than 3 completed nu values";
    } else if (!all_positive) {
        rep.degenerate = true;
        rep.fit_note = "fit skipped: degenerate sweep (zero errors)";
    } else {
        rep.fit = fit_rate(nu, total);
        if (std::all_of(u_err.begin(), u_err.end(), [](double v) { return v > 0.0; })) rep.fit_u = fit_rate(nu, u_err);
        if (std::all_of(aux.begin(), aux.end(), [](double v) { return v > 0.0; })) rep.fit_aux = fit_rate(nu, aux);
        rep.super_linear = rep.fit->slope > 1.25;
        if (rep.super_linear) rep.fit_note = "slope above 1.25: faster than the O(nu) bound";
    }

    // Entries are ordered by decreasing nu.
    rep.e_total_monotone = true;
    rep.diff_monotone = true;
    const PairRecord* prev = nullptr;
    for (const auto& e : rep.entries) {
        if (!e.ok) continue;
        if (prev != nullptr) {
            if (e.e_total > prev->e_total) rep.e_total_monotone = false;
            if (e.e_sup_rho > prev->e_sup_rho || e.e_sup_u > prev->e_sup_u || e.e_sup_b > prev->e_sup_b)
                rep.diff_monotone = false;
        }
        prev = &e;
    }

    rep.pollution_guard_passed = false;
    rep.guidance.clear();
    if (rep.pollution_proxy && prev != nullptr) {
        rep.pollution_guard_passed = prev->e_total > 10.0 * *rep.pollution_proxy;
        if (!rep.pollution_guard_passed)
            rep.guidance = "e_total at the smallest nu is within 10x of the discretization proxy; refine the grid";
    }
}

ConvergenceReport sweep(std::span<const double> nu_list, const PairConfig& config, const SweepOptions& options) {
    if (nu_list.empty()) throw DomainError("sweep: empty nu list");
    std::vector<double> nus(nu_list.begin(), nu_list.end());
    for (double v : nus)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("sweep: nu values must be finite and >= 0");
    std::sort(nus.begin(), nus.end(), std::greater<>());
    if (std::adjacent_find(nus.begin(), nus.end()) != nus.end()) throw DomainError("sweep: duplicate nu values");

    ConvergenceReport rep;
    rep.nu = nus;
    rep.fingerprint = options.fingerprint;
    rep.entries.resize(nus.size());

    std::atomic<std::size_t> next{0};
    std::mutex done_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < nus.size(); i = next++) {
            PairRecord rec;
            auto fail = [&](const char* kind, const std::exception& ex) {
                rec = PairRecord{};
                rec.nu = nus[i];
                rec.ok = false;
                rec.failure_kind = kind;
                rec.failure = ex.what();
            };
            try {
                rec = run_pair(nus[i], config);
            } catch (const BoundaryError& ex) {
                fail("boundary", ex);
            } catch (const NumericalError& ex) {
                fail("numerical", ex);
            } catch (const std::exception& ex) {
                fail("domain", ex);
            }
            std::lock_guard lock(done_mutex);
            rep.entries[i] = std::move(rec);
            if (options.on_entry) options.on_entry(rep.entries[i]);
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(nus.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    if (options.pollution_guard) rep.pollution_proxy = discretization_proxy(config);
    finalize_report(rep);
    return rep;
}

nlohmann::json to_json(const ConvergenceReport& rep) {
    using nlohmann::json;
    auto fit_json = [](const std::optional<RateFit>& f) -> json {
        if (!f) return nullptr;
        return {{"slope", f->slope}, {"intercept", f->intercept}, {"rms_residual", f->rms_residual}};
    };
    json entries = json::array();
    for (const auto& e : rep.entries) {
        entries.push_back({{"nu", e.nu},
                           {"ok", e.ok},
                           {"failure_kind", e.failure_kind},
                           {"failure", e.failure},
                           {"e_sup", e.e_sup},
                           {"e_sup_rho", e.e_sup_rho},
                           {"e_sup_u", e.e_sup_u},
                           {"e_sup_b", e.e_sup_b},
                           {"e_diss", e.e_diss},
                           {"e_total", e.e_total},
                           {"aux", e.aux},
                           {"clip_events", e.clip_events}});
    }
    json j;
    j["nu"] = rep.nu;
    j["entries"] = std::move(entries);
    j["fit"] = fit_json(rep.fit);
    j["fit_u"] = fit_json(rep.fit_u);
    j["fit_aux"] = fit_json(rep.fit_aux);
    j["degenerate"] = rep.degenerate;
    j["fit_note"] = rep.fit_note;
    j["super_linear"] = rep.super_linear;
    j["e_total_monotone"] = rep.e_total_monotone;
    j["diff_monotone"] = rep.diff_monotone;
    j["pollution_proxy"] = rep.pollution_proxy ? json(*rep.pollution_proxy) : json(nullptr);
    j["pollution_guard_passed"] = rep.pollution_guard_passed;
    j["guidance"] = rep.guidance;
    j["fingerprint"] = rep.fingerprint;
    return j;
}

}  // namespace mhd1d
