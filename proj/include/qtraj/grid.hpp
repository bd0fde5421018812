// Uniform candidate-parameter grid and nearest-point lookup.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qtraj {

/// Grid theta_i = theta0 + i*d_theta, i = 0..n_p (n_p+1 points).
struct ParameterGrid {
    double theta0 = 0.0;
    double d_theta = 0.0;
    int n_p = 0;

    int size() const { return n_p + 1; }
    double value(int i) const { return theta0 + static_cast<double>(i) * d_theta; }

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(size()));
        for (int i = 0; i <= n_p; ++i) v[static_cast<std::size_t>(i)] = value(i);
        return v;
    }
};

inline ParameterGrid build_grid(double theta0, double d_theta, int n_p) {
    if (!(d_theta > 0.0) || !std::isfinite(d_theta) || !std::isfinite(theta0))
        throw std::invalid_argument("build_grid: d_theta must be positive and finite");
    if (n_p < 1) throw std::invalid_argument("build_grid: need at least one grid step");
    return ParameterGrid{theta0, d_theta, n_p};
}

/// Index of the grid point nearest to theta_hat, clamped to [1, n_p] so a
/// backward difference at the returned index always exists. Exact midpoints
/// resolve to the larger index.
inline int nearest_grid_index(double theta_hat, const ParameterGrid& grid) {
    if (!std::isfinite(theta_hat))
        throw std::invalid_argument("nearest_grid_index: theta_hat must be finite");
    if (grid.n_p < 1)
        throw std::invalid_argument("nearest_grid_index: grid needs at least two points");
    const double u = (theta_hat - grid.theta0) / grid.d_theta;
    const double j = std::floor(u + 0.5);  // half-up = ties toward larger index
    if (j <= 1.0) return 1;
    if (j >= static_cast<double>(grid.n_p)) return grid.n_p;
    return static_cast<int>(j);
}

}  // namespace qtraj
