#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhd1d {

/// Floor applied to density only where it appears as a divisor.
inline constexpr double kDensityFloor = 1e-12;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Uniform cell-centred mesh on [-L, L].
class Grid1D {
public:
    Grid1D(double half_width, std::size_t n_cells);

    double half_width() const { return half_width_; }
    std::size_t size() const { return n_cells_; }
    double dx() const { return dx_; }
    /// Mirror-symmetric: x(n-1-i) == -x(i) exactly.
    double x(std::size_t i) const {
        return 0.5 * dx_ * (static_cast<double>(2 * i + 1) - static_cast<double>(n_cells_));
    }
    std::vector<double> nodes() const;

    bool operator==(const Grid1D&) const = default;

private:
    double half_width_;
    std::size_t n_cells_;
    double dx_;
};

struct PhysParams {
    double mu = 0.1;
    double nu = 0.0;
    double gamma = 1.4;
    double rho_bar = 1.0;
    double b_bar = 1.0;
    double alpha = 2.0;

    /// Every violated constraint, one message each. Empty when valid.
    std::vector<std::string> violations() const;
    void validate() const;

    bool operator==(const PhysParams&) const = default;
};

/// Fields at one instant. `mom` is the momentum density rho*u.
struct State {
    std::vector<double> rho;
    std::vector<double> mom;
    std::vector<double> b;
    double t = 0.0;

    State() = default;
    explicit State(std::size_t n) : rho(n, 0.0), mom(n, 0.0), b(n, 0.0) {}

    std::size_t size() const { return rho.size(); }
    /// Throws if array lengths disagree or density is negative/non-finite.
    void check(const Grid1D& grid) const;

    bool operator==(const State&) const = default;
};

/// Per-node scalar bound to a grid.
struct FieldScalar {
    std::vector<double> values;
    const Grid1D* grid = nullptr;

    FieldScalar() = default;
    FieldScalar(std::vector<double> v, const Grid1D& g);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// --- pointwise helpers -----------------------------------------------------

double pressure(double rho, double gamma);
double potential_energy(double rho, double gamma, double rho_bar);
inline double safe_density(double rho) { return rho > kDensityFloor ? rho : kDensityFloor; }

// --- stencils --------------------------------------------------------------

/// Second-order first derivative: central inside, one-sided at both ends.
std::vector<double> ddx(std::span<const double> f, double dx);
/// Second-order second derivative: central inside, one-sided at both ends.
std::vector<double> d2dx2(std::span<const double> f, double dx);

// --- field operations ------------------------------------------------------

std::vector<double> velocity(const State& state);

FieldScalar pressure(const FieldScalar& rho, double gamma);
FieldScalar potential_energy(const FieldScalar& rho, double gamma, double rho_bar);

/// F = mu u_x - (P(rho) - P(rho_bar) + (b^2 - b_bar^2)/2).
FieldScalar effective_viscous_flux(const State& state, const PhysParams& params, const Grid1D& grid);

/// u_t + u u_x.
FieldScalar material_derivative(const State& state, const FieldScalar& u_t, const Grid1D& grid);

/// |u| + sqrt(gamma rho^(gamma-1) + b^2/rho), with the density floor.
double fast_speed(double rho, double u, double b, double gamma);
FieldScalar fast_speed(const State& state, const PhysParams& params, const Grid1D& grid);

}  // namespace mhd1d
