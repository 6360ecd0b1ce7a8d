#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "reltrace/kinematics.hpp"

namespace reltrace {

/// Where a sampled density came from.
struct DensityMeta {
    std::string system;
    std::map<std::string, double> parameters;
    int k_max = 0;
    double sigma = 0.0;
    /// Orbits or terms that were skipped, truncation points, ...
    std::vector<std::string> diagnostics;
    std::vector<std::string> warnings;
};

/// Density of states g(eps) sampled on a strictly increasing grid.
struct DensityGrid {
    std::vector<double> eps;
    std::vector<double> g;
    DensityMeta meta;

    std::size_t size() const { return eps.size(); }

    /// Throws ContractError on length mismatch, a non-increasing grid or
    /// an empty system tag.
    void validate() const;
};

/// Checks that eps is strictly increasing and non-empty.
void require_increasing_grid(std::span<const double> eps);

/// Sum over levels of degeneracy * gaussian_kernel(eps - eps_n, sigma).
/// An empty level list gives a zero grid and a warning in meta.
DensityGrid broadened_density(std::span<const Level> levels, std::span<const double> grid, double sigma);

/// Right-continuous counting function N(eps) = sum of degeneracies with eps_n <= eps.
long staircase(std::span<const Level> levels, double eps);

struct Comparison {
    double rel_L2 = 0.0;
    double max_abs = 0.0;
};

/// Relative L2 distance ||a - b|| / ||a|| with trapezoid weights and the
/// pointwise maximum of |a - b|, both restricted to [lo, hi].
/// Grids must be identical; resampling is the caller's job.
Comparison compare(const DensityGrid& a, const DensityGrid& b, double lo, double hi);

/// Strict interior local maxima, refined by a parabola through the three
/// neighbouring samples.
std::vector<double> find_peaks(const DensityGrid& grid);

}  // namespace reltrace
