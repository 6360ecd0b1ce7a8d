#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reltrace/errors.hpp"
#include "reltrace/numeric.hpp"
#include "reltrace/spectra.hpp"

using namespace reltrace;

namespace {

Level level(double eps, long deg) {
    Level lv;
    lv.n = {0};
    lv.eps = eps;
    lv.degeneracy = deg;
    return lv;
}

DensityGrid tagged(std::vector<double> eps, std::vector<double> g) {
    DensityGrid d;
    d.eps = std::move(eps);
    d.g = std::move(g);
    d.meta.system = "test";
    return d;
}

}  // namespace

TEST_CASE("broadened_density integrates to the level count") {
    const std::vector<Level> levels = {level(2.0, 1), level(3.0, 3), level(4.5, 2)};
    const auto grid = linspace(-5.0, 12.0, 4001);
    const DensityGrid d = broadened_density(levels, grid, 0.3);
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) s += 0.5 * (d.g[i] + d.g[i - 1]) * (grid[i] - grid[i - 1]);
    CHECK(std::fabs(s - 6.0) < 1e-10);
    CHECK(d.meta.sigma == 0.3);
    CHECK(d.meta.warnings.empty());
}

TEST_CASE("broadened_density single level value") {
    const std::vector<Level> levels = {level(1.0, 2)};
    const std::vector<double> grid = {1.0, 1.5};
    const DensityGrid d = broadened_density(levels, grid, 0.5);
    const double peak = 2.0 / (0.5 * std::sqrt(2.0 * std::numbers::pi));
    CHECK(d.g[0] == doctest::Approx(peak).epsilon(1e-15));
    CHECK(d.g[1] == doctest::Approx(peak * std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("broadened_density edge cases") {
    const std::vector<double> grid = {0.0, 1.0};
    const DensityGrid empty = broadened_density({}, grid, 0.1);
    CHECK(empty.g == std::vector<double>{0.0, 0.0});
    CHECK(empty.meta.warnings.size() == 1);
    const std::vector<Level> levels = {level(1.0, 1)};
    CHECK_THROWS_AS(broadened_density(levels, grid, 0.0), DomainError);
    const std::vector<double> bad = {1.0, 1.0};
    CHECK_THROWS_AS(broadened_density(levels, bad, 0.1), ContractError);
}

TEST_CASE("staircase is right-continuous") {
    const std::vector<Level> levels = {level(1.5, 1), level(3.0, 3)};
    CHECK(staircase(levels, 1.4999) == 0);
    CHECK(staircase(levels, 1.5) == 1);
    CHECK(staircase(levels, 2.9) == 1);
    CHECK(staircase(levels, 3.0) == 4);
    CHECK(staircase(levels, 100.0) == 4);
}

TEST_CASE("compare: identical, scaled and mismatched grids") {
    const auto e = linspace(0.0, 1.0, 101);
    std::vector<double> g(e.size()), h(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        g[i] = 1.0 + e[i];
        h[i] = 1.1 * g[i];
    }
    const auto a = tagged(e, g);
    const auto b = tagged(e, h);
    CHECK(compare(a, a, 0.0, 1.0).rel_L2 == 0.0);
    const Comparison c = compare(a, b, 0.0, 1.0);
    CHECK(c.rel_L2 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c.max_abs == doctest::Approx(0.2).epsilon(1e-12));
    auto shifted = b;
    shifted.eps[5] += 1e-9;
    CHECK_THROWS_AS(compare(a, shifted, 0.0, 1.0), ContractError);
    CHECK_THROWS_AS(compare(a, b, -1.0, 1.0), ContractError);
    auto untagged = b;
    untagged.meta.system.clear();
    CHECK_THROWS_AS(compare(a, untagged, 0.0, 1.0), ContractError);
}

TEST_CASE("compare: trapezoid weighting of a known integral") {
    // ||x|| on [0, 1] versus ||x - x^2||: exact ratio sqrt((1/30) / (1/3))
    const auto e = linspace(0.0, 1.0, 20001);
    std::vector<double> g(e.size()), h(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        g[i] = e[i];
        h[i] = e[i] * e[i];
    }
    const Comparison c = compare(tagged(e, g), tagged(e, h), 0.0, 1.0);
    CHECK(std::fabs(c.rel_L2 - std::sqrt(0.1)) < 1e-8);
    CHECK(c.max_abs == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("find_peaks refines to the vertex of a parabola") {
    const auto e = linspace(0.0, 10.0, 51);
    std::vector<double> g(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) g[i] = -(e[i] - 3.07) * (e[i] - 3.07);
    const auto peaks = find_peaks(tagged(e, g));
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0] == doctest::Approx(3.07).epsilon(1e-12));
}

TEST_CASE("find_peaks on broadened levels") {
    const std::vector<Level> levels = {level(1.5, 1), level(3.0, 3), level(4.5, 3)};
    const auto grid = linspace(0.0, 6.0, 601);
    const auto peaks = find_peaks(broadened_density(levels, grid, 0.1));
    REQUIRE(peaks.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(peaks[i] - levels[i].eps) < 1e-3);
    // monotone data has no interior maximum
    CHECK(find_peaks(tagged({0, 1, 2}, {0, 1, 2})).empty());
}

TEST_CASE("DensityGrid validation") {
    CHECK_NOTHROW(tagged({0, 1}, {0, 0}).validate());
    CHECK_THROWS_AS(tagged({0, 1}, {0}).validate(), ContractError);
    CHECK_THROWS_AS(tagged({1, 0}, {0, 0}).validate(), ContractError);
    CHECK_THROWS_AS(tagged({}, {}).validate(), ContractError);
}

TEST_CASE("compensated sum and parallel_for") {
    CompensatedSum s;
    s.add(1.0);
    s.add(1e100);
    s.add(1.0);
    s.add(-1e100);
    CHECK(s.value() == 2.0);
    std::vector<double> out(1000, 0.0);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = double(i) * i; });
    for (std::size_t i = 0; i < out.size(); ++i) REQUIRE(out[i] == double(i) * i);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw DomainError("boom");
                    }),
                    DomainError);
}
