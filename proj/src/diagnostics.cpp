#include "mhd1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "mhd1d/scenario.hpp"

namespace mhd1d {

double lp_norm(std::span<const double> f, int p, const Grid1D& grid) {
    if (p == kSupNorm) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    if (p != 2 && p != 4 && p != 6) throw DomainError("lp_norm: p must be 2, 4, 6 or sup");
    double sum = 0.0;
    for (double v : f) {
        const double a2 = v * v;
        sum += p == 2 ? a2 : (p == 4 ? a2 * a2 : a2 * a2 * a2);
    }
    return std::pow(sum * grid.dx(), 1.0 / p);
}

double weighted_l2(std::span<const double> f, double alpha, const Grid1D& grid) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * f[i] * std::pow(std::abs(grid.x(i)), alpha);
    return std::sqrt(sum * grid.dx());
}

std::vector<double> energy_density(const State& state, const PhysParams& params) {
    std::vector<double> e(state.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double rho = state.rho[i];
        const double u = state.mom[i] / safe_density(rho);
        const double db = state.b[i] - params.b_bar;
        e[i] = 0.5 * rho * u * u + potential_energy(rho, params.gamma, params.rho_bar) + 0.5 * db * db;
    }
    return e;
}

double total_energy(const State& state, const PhysParams& params, const Grid1D& grid) {
    return trapezoid(energy_density(state, params), grid.dx());
}

double weighted_energy(const State& state, const PhysParams& params, const Grid1D& grid) {
    auto e = energy_density(state, params);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] *= std::pow(std::abs(grid.x(i)), params.alpha);
    return trapezoid(e, grid.dx());
}

FieldScalar momentum_potential(const State& state, const Grid1D& grid) {
    const std::size_t n = state.size();
    std::vector<double> xi(n, 0.0);
    const double h = 0.5 * grid.dx();
    for (std::size_t i = 1; i < n; ++i) xi[i] = xi[i - 1] + h * (state.mom[i - 1] + state.mom[i]);
    return {std::move(xi), grid};
}

namespace {

std::vector<double> rho_udot(const State& state, const RhsOutput& r, const Grid1D& grid) {
    const auto u = velocity(state);
    const auto ux = ddx(u, grid.dx());
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state.rho[i] * (r.u_t[i] + u[i] * ux[i]);
    return out;
}

}  // namespace

double flux_identity_residual(const State& state, const RhsOutput& rhs_output, const PhysParams& params,
                              const Grid1D& grid) {
    const auto lhs = rho_udot(state, rhs_output, grid);
    const auto flux = effective_viscous_flux(state, params, grid);
    const auto flux_x = ddx(flux.values, grid.dx());
    std::vector<double> res(lhs.size());
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = lhs[i] - flux_x[i];
    return lp_norm(res, 2, grid);
}

DiagnosticsRow sample(const State& state, const RhsOutput& r, const PhysParams& params, const Grid1D& grid) {
    const std::size_t n = state.size();
    const double dx = grid.dx();
    const auto u = velocity(state);
    const auto ux = ddx(u, dx);
    const auto uxx = d2dx2(u, dx);
    const auto bx = ddx(state.b, dx);
    const auto rhox = ddx(state.rho, dx);

    std::vector<double> rho_dev(n), b_dev(n), sqrt_rho_udot(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho_dev[i] = state.rho[i] - params.rho_bar;
        b_dev[i] = state.b[i] - params.b_bar;
        // Vacuum annihilates the weight, whatever u_t is there.
        sqrt_rho_udot[i] = state.rho[i] > 0.0 ? std::sqrt(state.rho[i]) * (r.u_t[i] + u[i] * ux[i]) : 0.0;
    }

    DiagnosticsRow row;
    row.t = state.t;
    row.energy = total_energy(state, params, grid);
    row.weighted_energy = weighted_energy(state, params, grid);
    row.sup_rho = *std::max_element(state.rho.begin(), state.rho.end());
    row.sup_abs_b = lp_norm(state.b, kSupNorm, grid);
    row.sup_abs_u = lp_norm(u, kSupNorm, grid);
    row.rho_dev_l2 = lp_norm(rho_dev, 2, grid);
    row.b_dev_l4 = lp_norm(b_dev, 4, grid);
    row.ux_l2 = lp_norm(ux, 2, grid);
    row.bx_l2 = lp_norm(bx, 2, grid);
    row.rhox_l2 = lp_norm(rhox, 2, grid);
    row.sqrt_rho_udot_l2 = lp_norm(sqrt_rho_udot, 2, grid);
    row.flux_identity_residual = flux_identity_residual(state, r, params, grid);
    row.xi_sup = lp_norm(momentum_potential(state, grid).values, kSupNorm, grid);
    row.rho_t_l2 = lp_norm(r.drho, 2, grid);
    row.b_t_l2 = lp_norm(r.db, 2, grid);
    row.uxx_l2 = lp_norm(uxx, 2, grid);
    return row;
}

const std::vector<DiagnosticsColumn>& diagnostics_columns() {
    using R = DiagnosticsRow;
    static const std::vector<DiagnosticsColumn> cols = {
        {"t", &R::t},
        {"energy", &R::energy},
        {"weighted_energy", &R::weighted_energy},
        {"diss_u", &R::diss_u},
        {"diss_b", &R::diss_b},
        {"weighted_diss_u", &R::weighted_diss_u},
        {"weighted_diss_b", &R::weighted_diss_b},
        {"sup_rho", &R::sup_rho},
        {"sup_abs_b", &R::sup_abs_b},
        {"sup_abs_u", &R::sup_abs_u},
        {"rho_dev_l2", &R::rho_dev_l2},
        {"b_dev_l4", &R::b_dev_l4},
        {"b_dev_l6_pow6_int", &R::b_dev_l6_pow6_int},
        {"ux_l2", &R::ux_l2},
        {"bx_l2", &R::bx_l2},
        {"rhox_l2", &R::rhox_l2},
        {"sqrt_rho_udot_l2", &R::sqrt_rho_udot_l2},
        {"flux_identity_residual", &R::flux_identity_residual},
        {"xi_sup", &R::xi_sup},
        {"clipping_count", &R::clipping_count},
        {"rho_t_l2", &R::rho_t_l2},
        {"b_t_l2", &R::b_t_l2},
        {"uxx_l2", &R::uxx_l2},
        {"uxt_l2_sq_int", &R::uxt_l2_sq_int},
        {"nu_bx_l2_sq_int", &R::nu_bx_l2_sq_int},
    };
    return cols;
}

DissipationAccumulator::DissipationAccumulator(const PhysParams& params, const Grid1D& grid)
    : params_(params), grid_(grid) {}

DissipationAccumulator::Integrands DissipationAccumulator::integrands(const State& state) const {
    const double dx = grid_.dx();
    const auto u = velocity(state);
    const auto ux = ddx(u, dx);
    const auto bx = ddx(state.b, dx);
    std::vector<double> b_dev(state.size());
    for (std::size_t i = 0; i < b_dev.size(); ++i) b_dev[i] = state.b[i] - params_.b_bar;

    const double ux2 = std::pow(lp_norm(ux, 2, grid_), 2);
    const double bx2 = std::pow(lp_norm(bx, 2, grid_), 2);
    Integrands in{};
    in.diss_u = params_.mu * ux2;
    in.diss_b = params_.nu * bx2;
    in.wdiss_u = params_.mu * std::pow(weighted_l2(ux, params_.alpha, grid_), 2);
    in.wdiss_b = params_.nu * std::pow(weighted_l2(bx, params_.alpha, grid_), 2);
    in.b6 = std::pow(lp_norm(b_dev, 6, grid_), 6);
    in.nubx = params_.nu * params_.nu * bx2;
    return in;
}

void DissipationAccumulator::advance(const State& state, double dt) {
    const Integrands now = integrands(state);
    if (started_) {
        const double h = 0.5 * dt;
        total_.diss_u += h * (last_.diss_u + now.diss_u);
        total_.diss_b += h * (last_.diss_b + now.diss_b);
        total_.wdiss_u += h * (last_.wdiss_u + now.wdiss_u);
        total_.wdiss_b += h * (last_.wdiss_b + now.wdiss_b);
        total_.b6 += h * (last_.b6 + now.b6);
        total_.nubx += h * (last_.nubx + now.nubx);
    }
    started_ = true;
    last_ = now;
}

void DissipationAccumulator::add_sample_integrand(double t, double uxt_l2_sq) {
    if (have_uxt_) uxt_total_ += 0.5 * (t - last_sample_t_) * (last_uxt_ + uxt_l2_sq);
    have_uxt_ = true;
    last_sample_t_ = t;
    last_uxt_ = uxt_l2_sq;
}

void DissipationAccumulator::fill(DiagnosticsRow& row) const {
    row.diss_u = total_.diss_u;
    row.diss_b = total_.diss_b;
    row.weighted_diss_u = total_.wdiss_u;
    row.weighted_diss_b = total_.wdiss_b;
    row.b_dev_l6_pow6_int = total_.b6;
    row.nu_bx_l2_sq_int = total_.nubx;
    row.uxt_l2_sq_int = uxt_total_;
}

void write_csv(std::ostream& os, const DiagnosticsRecord& record) {
    const auto& cols = diagnostics_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].name;
    os << '\n';
    char buf[40];
    for (const auto& row : record.rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row.*(cols[c].member));
            os << (c ? "," : "") << buf;
        }
        os << '\n';
    }
}

DiagnosticsRecord read_csv(std::istream& is) {
    const auto& cols = diagnostics_columns();
    std::string line;
    if (!std::getline(is, line)) throw DomainError("diagnostics csv: missing header");
    {
        std::istringstream hs(line);
        std::string name;
        std::size_t c = 0;
        while (std::getline(hs, name, ',')) {
            if (c >= cols.size() || name != cols[c].name)
                throw DomainError("diagnostics csv: unexpected column '" + name + "'");
            ++c;
        }
        if (c != cols.size()) throw DomainError("diagnostics csv: missing columns");
    }
    DiagnosticsRecord rec;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        DiagnosticsRow row;
        for (const auto& col : cols) {
            if (!std::getline(ls, cell, ',')) throw DomainError("diagnostics csv: short row");
            row.*(col.member) = std::strtod(cell.c_str(), nullptr);
        }
        rec.rows.push_back(row);
    }
    return rec;
}

bool NuIndependenceReport::any_flagged() const {
    return std::any_of(entries.begin(), entries.end(), [](const SpreadEntry& e) { return e.flagged; });
}

const SpreadEntry& NuIndependenceReport::at(std::string_view quantity) const {
    for (const auto& e : entries)
        if (e.quantity == quantity) return e;
    throw DomainError("no such quantity: " + std::string(quantity));
}

namespace {

enum class Reduce { SupInTime, Final };

struct Monitored {
    std::string_view name;
    double DiagnosticsRow::*member;
    Reduce reduce;
    bool excluded;
    int power;
};

double reduce_record(const DiagnosticsRecord& rec, const Monitored& m) {
    if (rec.rows.empty()) throw DomainError("nu_independence_report: empty record");
    auto value = [&](const DiagnosticsRow& r) { return std::pow(r.*(m.member), m.power); };
    if (m.reduce == Reduce::Final) return value(rec.rows.back());
    double best = value(rec.rows.front());
    for (const auto& r : rec.rows) best = std::max(best, value(r));
    return best;
}

}  // namespace

NuIndependenceReport nu_independence_report(const std::vector<DiagnosticsRecord>& records, double threshold) {
    if (records.size() < 3) throw DomainError("nu_independence_report: need at least 3 records");
    double nu_min = records.front().nu, nu_max = records.front().nu;
    for (const auto& r : records) {
        nu_min = std::min(nu_min, r.nu);
        nu_max = std::max(nu_max, r.nu);
        if (r.config_tag != records.front().config_tag)
            throw DomainError("nu_independence_report: records come from different configurations");
        if (r.rows.size() != records.front().rows.size())
            throw DomainError("nu_independence_report: records have different sample counts");
        for (std::size_t k = 0; k < r.rows.size(); ++k)
            if (r.rows[k].t != records.front().rows[k].t)
                throw DomainError("nu_independence_report: sample times differ");
    }
    if (!(nu_min > 0.0) || nu_max < 100.0 * nu_min)
        throw DomainError("nu_independence_report: nu values must be positive and span at least 2 decades");

    using R = DiagnosticsRow;
    static const Monitored monitored[] = {
        {"sup_rho", &R::sup_rho, Reduce::SupInTime, false, 1},
        {"sup_abs_b", &R::sup_abs_b, Reduce::SupInTime, false, 1},
        {"sup_abs_u", &R::sup_abs_u, Reduce::SupInTime, false, 1},
        {"sup_ux_l2", &R::ux_l2, Reduce::SupInTime, false, 1},
        {"sup_rhox_l2", &R::rhox_l2, Reduce::SupInTime, false, 1},
        {"sup_bx_l2", &R::bx_l2, Reduce::SupInTime, false, 1},
        {"sup_energy", &R::energy, Reduce::SupInTime, false, 1},
        {"sup_weighted_energy", &R::weighted_energy, Reduce::SupInTime, false, 1},
        {"diss_u", &R::diss_u, Reduce::Final, false, 1},
        {"weighted_diss_u", &R::weighted_diss_u, Reduce::Final, false, 1},
        {"sup_rho_dev_l2", &R::rho_dev_l2, Reduce::SupInTime, false, 1},
        {"sup_b_dev_l4_pow4", &R::b_dev_l4, Reduce::SupInTime, false, 4},
        {"b_dev_l6_pow6_int", &R::b_dev_l6_pow6_int, Reduce::Final, false, 1},
        {"sup_rho_t_l2", &R::rho_t_l2, Reduce::SupInTime, false, 1},
        {"sup_sqrt_rho_udot_l2", &R::sqrt_rho_udot_l2, Reduce::SupInTime, false, 1},
        {"diss_b", &R::diss_b, Reduce::Final, true, 1},
        {"weighted_diss_b", &R::weighted_diss_b, Reduce::Final, true, 1},
        {"nu_bx_l2_sq_int", &R::nu_bx_l2_sq_int, Reduce::Final, true, 1},
    };

    NuIndependenceReport rep;
    rep.threshold = threshold;
    for (const auto& r : records) rep.nu.push_back(r.nu);
    for (const auto& m : monitored) {
        SpreadEntry e;
        e.quantity = std::string(m.name);
        e.excluded = m.excluded;
        for (const auto& r : records) e.values.push_back(reduce_record(r, m));
        const auto [lo, hi] = std::minmax_element(e.values.begin(), e.values.end());
        const double scale = std::max(std::abs(*lo), std::abs(*hi));
        e.spread = scale > 0.0 ? (*hi - *lo) / scale : 0.0;
        e.flagged = !e.excluded && e.spread > threshold;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace mhd1d
