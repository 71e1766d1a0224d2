#include "mhd1d/manufactured.hpp"

#include <algorithm>
#include <cmath>

#include "mhd1d/diagnostics.hpp"

namespace mhd1d {

Manufactured gaussian_manufactured(const PhysParams& params) {
    const double rho_bar = params.rho_bar;
    const double b_bar = params.b_bar;
    return [rho_bar, b_bar](double x, double t) {
        const double g = std::exp(-x * x);
        const double gx = -2.0 * x * g;
        const double gxx = (4.0 * x * x - 2.0) * g;

        ManufacturedPoint q{};
        const double ar = 0.1 * (1.0 + 0.5 * std::sin(2.0 * t));
        const double ar_t = 0.1 * std::cos(2.0 * t);
        q.rho = rho_bar + ar * g;
        q.rho_t = ar_t * g;
        q.rho_x = ar * gx;

        const double s = std::sin(x), c = std::cos(x);
        const double h = s * g;
        const double hx = c * g + s * gx;
        const double hxx = -s * g + 2.0 * c * gx + s * gxx;
        const double au = 0.2 * std::cos(t);
        const double au_t = -0.2 * std::sin(t);
        q.u = au * h;
        q.u_t = au_t * h;
        q.u_x = au * hx;
        q.u_xx = au * hxx;

        const double shift = 0.2 * std::sin(t);
        const double shift_t = 0.2 * std::cos(t);
        const double xi = x - shift;
        const double k = std::exp(-xi * xi);
        const double kx = -2.0 * xi * k;
        const double kxx = (4.0 * xi * xi - 2.0) * k;
        const double ab = 0.1 * (1.0 + 0.5 * std::cos(2.0 * t));
        const double ab_t = -0.1 * std::sin(2.0 * t);
        q.b = b_bar + ab * k;
        q.b_t = ab_t * k - ab * kx * shift_t;
        q.b_x = ab * kx;
        q.b_xx = ab * kxx;
        return q;
    };
}

double MmsStudy::min_order() const { return *std::min_element(order.begin(), order.end()); }

MmsStudy mms_order_study(const PhysParams& params, const SchemeConfig& scheme, const std::vector<std::size_t>& n_cells,
                         double half_width) {
    if (n_cells.size() < 2) throw DomainError("mms_order_study: need at least two grids");
    const Manufactured mf = gaussian_manufactured(params);
    MmsStudy study;
    study.n_cells = n_cells;
    for (std::size_t n : n_cells) {
        const Grid1D grid(half_width, n);
        Stepper stepper(params, scheme, grid, Mode::Resistive, &mf);
        State s = sample_manufactured(mf, grid, 0.0);
        while (s.t < scheme.end_time) {
            const double remaining = scheme.end_time - s.t;
            double dt = stable_dt(s, params, scheme, grid);
            const bool last = dt >= remaining;
            if (last) dt = remaining;
            s = stepper.step(s, dt);
            if (last) s.t = scheme.end_time;
        }
        const State exact = sample_manufactured(mf, grid, scheme.end_time);
        const auto u = velocity(s);
        const auto ue = velocity(exact);
        std::vector<double> er(n), eu(n), eb(n);
        for (std::size_t i = 0; i < n; ++i) {
            er[i] = s.rho[i] - exact.rho[i];
            eu[i] = u[i] - ue[i];
            eb[i] = s.b[i] - exact.b[i];
        }
        study.errors.push_back({lp_norm(er, 2, grid), lp_norm(eu, 2, grid), lp_norm(eb, 2, grid)});
    }
    // Least squares of log(error) against log(dx).
    for (std::size_t f = 0; f < 3; ++f) {
        double mx = 0.0, my = 0.0;
        const double m = static_cast<double>(n_cells.size());
        for (std::size_t k = 0; k < n_cells.size(); ++k) {
            mx += std::log(2.0 * half_width / static_cast<double>(n_cells[k]));
            my += std::log(study.errors[k][f]);
        }
        mx /= m;
        my /= m;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t k = 0; k < n_cells.size(); ++k) {
            const double lx = std::log(2.0 * half_width / static_cast<double>(n_cells[k])) - mx;
            sxx += lx * lx;
            sxy += lx * (std::log(study.errors[k][f]) - my);
        }
        study.order[f] = sxy / sxx;
    }
    return study;
}

}  // namespace mhd1d
