#include <doctest.h>

#include <cmath>
#include <vector>

#include "mhd1d/limit_study.hpp"

using namespace mhd1d;

namespace {

PairConfig small_config() {
    PairConfig c;
    c.half_width = 20.0;
    c.n_cells = 256;
    c.scheme.end_time = 0.5;
    c.scheme.samples = 10;
    c.config_tag = "test";
    return c;
}

// Least squares slope written out directly, as an independent oracle.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("fit_rate on exact power laws") {
    const std::vector<double> nu{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<double> e(nu.size());

    for (std::size_t i = 0; i < nu.size(); ++i) e[i] = nu[i];
    auto f = fit_rate(nu, e);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.rms_residual < 1e-12);

    for (std::size_t i = 0; i < nu.size(); ++i) e[i] = std::sqrt(nu[i]);
    f = fit_rate(nu, e);
    CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.rms_residual < 1e-12);

    for (std::size_t i = 0; i < nu.size(); ++i) e[i] = 7.0 * nu[i];
    f = fit_rate(nu, e);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(7.0).epsilon(1e-10));
}

TEST_CASE("fit_rate with one perturbed point") {
    const std::vector<double> nu{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<double> e(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) e[i] = 2.0 * nu[i];
    e[2] *= 1.01;
    const auto f = fit_rate(nu, e);
    CHECK(std::abs(f.slope - 1.0) <= 0.02);
    CHECK(f.slope == doctest::Approx(ols_slope(nu, e)).epsilon(1e-12));
}

TEST_CASE("fit_rate rejects unusable input") {
    CHECK_THROWS_AS(fit_rate(std::vector<double>{1e-2, 1e-3}, std::vector<double>{1.0, 0.1}), DomainError);
    CHECK_THROWS_AS(fit_rate(std::vector<double>{1e-2, 1e-3, 1e-4}, std::vector<double>{0.0, 0.0, 0.0}),
                    DomainError);
}

TEST_CASE("run_pair at nu = 0 compares identical runs") {
    const auto r = run_pair(0.0, small_config());
    CHECK(r.ok);
    CHECK(r.e_sup == 0.0);
    CHECK(r.e_diss == 0.0);
    CHECK(r.e_total == 0.0);
    CHECK(r.aux == 0.0);
}

TEST_CASE("run_pair at zero end time has no error") {
    PairConfig c = small_config();
    c.scheme.end_time = 0.0;
    const auto r = run_pair(1e-2, c);
    CHECK(r.e_total == 0.0);
    CHECK(r.diagnostics.rows.size() == 1);
}

TEST_CASE("run_pair error shrinks with nu") {
    const PairConfig c = small_config();
    const auto big = run_pair(1e-2, c);
    const auto small = run_pair(1e-3, c);
    CHECK(small.e_total > 0.0);
    CHECK(small.e_total < big.e_total);
    CHECK(small.aux < big.aux);
    CHECK(big.clip_events == 0);
    CHECK(big.e_total == doctest::Approx(big.e_sup + big.e_diss));
}

TEST_CASE("sweep orders nu, fits, and is deterministic across job counts") {
    const PairConfig c = small_config();
    const std::vector<double> nus{1e-3, 1e-2, 1e-4};
    SweepOptions serial;
    serial.pollution_guard = false;
    SweepOptions parallel = serial;
    parallel.jobs = 3;
    const auto a = sweep(nus, c, serial);
    const auto b = sweep(nus, c, parallel);
    CHECK(a.nu == std::vector<double>{1e-2, 1e-3, 1e-4});
    REQUIRE(a.fit.has_value());
    CHECK(std::isfinite(a.fit->slope));
    CHECK(a.e_total_monotone);
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("sweep edge cases") {
    const PairConfig c = small_config();
    SweepOptions o;
    o.pollution_guard = false;
    SUBCASE("single nu skips the fit") {
        const auto r = sweep(std::vector<double>{1e-3}, c, o);
        CHECK_FALSE(r.fit.has_value());
        CHECK_FALSE(r.fit_note.empty());
    }
    SUBCASE("zero errors are degenerate") {
        PairConfig flat = c;
        flat.scenario.a_rho = flat.scenario.a_u = flat.scenario.a_b = 0.0;
        const auto r = sweep(std::vector<double>{1e-2, 1e-3, 1e-4}, flat, o);
        CHECK(r.degenerate);
        CHECK_FALSE(r.fit.has_value());
    }
    SUBCASE("invalid lists") {
        CHECK_THROWS_AS(sweep(std::vector<double>{}, c, o), DomainError);
        CHECK_THROWS_AS(sweep(std::vector<double>{1e-3, 1e-3}, c, o), DomainError);
        CHECK_THROWS_AS(sweep(std::vector<double>{-1e-3}, c, o), DomainError);
    }
    SUBCASE("failed pairs are reported, not fatal") {
        PairConfig tight = c;
        tight.half_width = 10.0;
        tight.scenario.sigma = 2.0;
        tight.scheme.end_time = 8.0;
        tight.scheme.samples = 4;
        std::vector<PairRecord> seen;
        o.on_entry = [&](const PairRecord& r) { seen.push_back(r); };
        const auto r = sweep(std::vector<double>{1e-2}, tight, o);
        REQUIRE(r.entries.size() == 1);
        CHECK_FALSE(r.entries[0].ok);
        CHECK(r.entries[0].failure_kind == "boundary");
        CHECK(seen.size() == 1);
    }
}

TEST_CASE("finalize_report: pollution guard") {
    ConvergenceReport rep;
    for (double nu : {1e-2, 1e-3, 1e-4}) {
        PairRecord e;
        e.nu = nu;
        e.e_total = e.e_sup = e.e_sup_u = e.aux = nu;
        rep.nu.push_back(nu);
        rep.entries.push_back(e);
    }
    rep.pollution_proxy = 1e-6;
    finalize_report(rep);
    CHECK(rep.pollution_guard_passed);
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope == doctest::Approx(1.0));
    CHECK_FALSE(rep.super_linear);

    rep.pollution_proxy = 1e-4;
    finalize_report(rep);
    CHECK_FALSE(rep.pollution_guard_passed);
    CHECK_FALSE(rep.guidance.empty());

    for (auto& e : rep.entries) e.e_total = e.nu * e.nu;
    finalize_report(rep);
    CHECK(rep.super_linear);
}
