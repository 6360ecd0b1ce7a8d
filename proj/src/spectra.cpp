#include "reltrace/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "reltrace/errors.hpp"
#include "reltrace/numeric.hpp"
#include "reltrace/special_functions.hpp"

namespace reltrace {

void require_increasing_grid(std::span<const double> eps) {
    if (eps.empty()) throw ContractError("density grid is empty");
    for (std::size_t i = 1; i < eps.size(); ++i) {
        if (!(eps[i] > eps[i - 1])) {
            throw ContractError("density grid must be strictly increasing");
        }
    }
}

void DensityGrid::validate() const {
    if (eps.size() != g.size()) throw ContractError("density grid: eps/g length mismatch");
    require_increasing_grid(eps);
    if (meta.system.empty()) throw ContractError("density grid: missing provenance");
}

DensityGrid broadened_density(std::span<const Level> levels, std::span<const double> grid, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("broadened_density: sigma must be positive");
    require_increasing_grid(grid);

    DensityGrid out;
    out.eps.assign(grid.begin(), grid.end());
    out.g.assign(grid.size(), 0.0);
    out.meta.system = "broadened-levels";
    out.meta.sigma = sigma;
    out.meta.parameters["levels"] = static_cast<double>(levels.size());
    if (levels.empty()) {
        out.meta.warnings.emplace_back("empty level list");
        return out;
    }

    // Only levels within 40 sigma contribute at double precision.
    const double reach = 40.0 * sigma;
    parallel_for(grid.size(), [&](std::size_t i) {
        const double e = grid[i];
        CompensatedSum acc;
        for (const Level& lv : levels) {
            const double d = e - lv.eps;
            if (std::fabs(d) > reach) continue;
            acc.add(lv.degeneracy * gaussian_kernel(d, sigma));
        }
        out.g[i] = acc.value();
    });
    return out;
}

long staircase(std::span<const Level> levels, double eps) {
    long count = 0;
    for (const Level& lv : levels) {
        if (lv.eps <= eps) count += lv.degeneracy;
    }
    return count;
}

Comparison compare(const DensityGrid& a, const DensityGrid& b, double lo, double hi) {
    a.validate();
    b.validate();
    if (a.eps != b.eps) throw ContractError("compare: grids differ");
    if (!(lo < hi) || lo < a.eps.front() || hi > a.eps.back()) {
        throw ContractError("compare: window outside the grid");
    }

    CompensatedSum diff2;
    CompensatedSum ref2;
    double max_abs = 0.0;
    const auto& e = a.eps;
    const std::size_t n = e.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (e[i] < lo || e[i] > hi) continue;
        const double d = a.g[i] - b.g[i];
        max_abs = std::max(max_abs, std::fabs(d));
        // trapezoid weight from the neighbours that are inside the window
        double w = 0.0;
        if (i > 0 && e[i - 1] >= lo) w += 0.5 * (e[i] - e[i - 1]);
        if (i + 1 < n && e[i + 1] <= hi) w += 0.5 * (e[i + 1] - e[i]);
        diff2.add(w * d * d);
        ref2.add(w * a.g[i] * a.g[i]);
    }
    Comparison out;
    out.max_abs = max_abs;
    const double ref = ref2.value();
    const double num = diff2.value();
    if (ref > 0.0) {
        out.rel_L2 = std::sqrt(num / ref);
    } else {
        out.rel_L2 = num > 0.0 ? INFINITY : 0.0;
    }
    return out;
}

std::vector<double> find_peaks(const DensityGrid& grid) {
    grid.validate();
    std::vector<double> peaks;
    const auto& e = grid.eps;
    const auto& g = grid.g;
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
        if (!(g[i] > g[i - 1] && g[i] > g[i + 1])) continue;
        // parabola through (x0,y0),(x1,y1),(x2,y2), vertex location
        const double x0 = e[i - 1], x1 = e[i], x2 = e[i + 1];
        const double y0 = g[i - 1], y1 = g[i], y2 = g[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curv = (d12 - d01) / (x2 - x0);
        double x = x1;
        if (curv < 0.0) {
            x = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
            x = std::clamp(x, x0, x2);
        }
        peaks.push_back(x);
    }
    return peaks;
}

}  // namespace reltrace
