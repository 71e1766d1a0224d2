#pragma once

#include <array>
#include <vector>

#include "mhd1d/solver.hpp"

namespace mhd1d {

/// Smooth manufactured solution decaying to (rho_bar, 0, b_bar):
///   rho* = rho_bar + 0.1 (1 + 0.5 sin 2t) exp(-x^2)
///   u*   = 0.2 sin(x) exp(-x^2) cos t
///   b*   = b_bar + 0.1 (1 + 0.5 cos 2t) exp(-(x - 0.2 sin t)^2)
Manufactured gaussian_manufactured(const PhysParams& params);

struct MmsStudy {
    std::vector<std::size_t> n_cells;
    /// L2 errors per grid for rho, u, b.
    std::vector<std::array<double, 3>> errors;
    /// Least-squares order over all grids, per field.
    std::array<double, 3> order{};
    double min_order() const;
};

/// Forced runs on [-half_width, half_width] to end_time, compared against
/// the manufactured solution.
MmsStudy mms_order_study(const PhysParams& params, const SchemeConfig& scheme, const std::vector<std::size_t>& n_cells,
                         double half_width = 10.0);

}  // namespace mhd1d
