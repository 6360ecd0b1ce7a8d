#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "reltrace/errors.hpp"
#include "reltrace/special_functions.hpp"

using namespace reltrace;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Power series sum (-x^2/4)^k / (k!)^2 in 50-digit arithmetic: valid for
// any moderate x because the cancellation is absorbed by the extra digits.
double j0_series_oracle(double xd) {
    const Big x = xd;
    const Big z = -x * x / 4;
    Big term = 1;
    Big sum = 1;
    for (int k = 1; k < 400; ++k) {
        term *= z / (Big(k) * k);
        sum += term;
        if (abs(term) < Big("1e-40") * (1 + abs(sum)) && k > abs(z)) break;
    }
    return static_cast<double>(sum);
}

double oracle_bisect(double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((j0_series_oracle(lo) > 0) == (j0_series_oracle(mid) > 0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sph_bessel_j0") {
    CHECK(sph_bessel_j0(0.0) == 1.0);
    CHECK(std::fabs(sph_bessel_j0(std::numbers::pi)) < 1e-16);
    CHECK(sph_bessel_j0(1.0) == doctest::Approx(0.8414709848078965).epsilon(1e-15));
    // continuity across the small-argument switch
    for (double x : {0.99999e-4, 1.00001e-4}) CHECK(std::fabs(sph_bessel_j0(x) - std::sin(x) / x) <= 2.3e-16);
    for (double x = 0.0; x < 1e4; x += 0.37) CHECK(std::fabs(sph_bessel_j0(x)) <= 1.0);
}

TEST_CASE("bessel_J0 examples") {
    CHECK(bessel_J0(0.0) == 1.0);
    CHECK(std::fabs(bessel_J0(1.0) - 0.7651976865579666) < 1e-15);
    CHECK(std::fabs(bessel_J0(1.0) - j0_series_oracle(1.0)) < 1e-15);
    CHECK(std::fabs(bessel_J0(2.404825557695773)) < 1e-10);
    // first zero located on the oracle by bisection
    const double zero = oracle_bisect(2.0, 3.0);
    CHECK(std::fabs(zero - 2.404825557695773) < 1e-14);
    CHECK(bessel_J0(-3.7) == bessel_J0(3.7));
}

TEST_CASE("bessel_J0 matches the series oracle on [0, 12] at 1000 points") {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = 12.0 * i / 999.0;
        worst = std::max(worst, std::fabs(bessel_J0(x) - j0_series_oracle(x)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("J0 branches overlap on [10, 14]") {
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 10.0 + 4.0 * i / 400.0;
        worst = std::max(worst, std::fabs(detail::bessel_J0_series(x) - detail::bessel_J0_large(x)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("large-x J0 against the high-precision series up to 60") {
    double worst = 0.0;
    for (int i = 0; i <= 480; ++i) {
        const double x = 12.0 + 0.1 * i;
        worst = std::max(worst, std::fabs(bessel_J0(x) - j0_series_oracle(x)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("large-x J0 against the independent library implementation up to 1e4") {
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double x = 60.0 + i * 0.4967;
        worst = std::max(worst, std::fabs(bessel_J0(x) - std::cyl_bessel_j(0.0, x)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("J0 is bounded by one") {
    for (double x = 0.0; x < 1e4; x += 0.173) CHECK(std::fabs(bessel_J0(x)) <= 1.0);
}

TEST_CASE("theta_direct examples") {
    // sum e^{-n^2}: direct terms to machine convergence
    double oracle = 0.0;
    for (int n = 10; n >= 1; --n) oracle += std::exp(-double(n) * n);
    CHECK(std::fabs(theta_direct({1.0, 1.0}, 1e-17) - oracle) < 1e-16);
    CHECK(std::fabs(oracle - 0.38631860) < 1e-8);
    CHECK(theta_direct({1e6, 1.0}, 1e-17) == 0.0);
    const double half = theta_direct({std::log(2.0), 1.0});
    CHECK(half > 0.5);
    CHECK(half < 0.58);
}

TEST_CASE("theta_direct hits the term cap loudly") {
    CHECK_THROWS_AS(theta_direct({1e-14, 1.0}, 1e-17), NumericalFailure);
}

TEST_CASE("theta_resummed examples") {
    CHECK(std::fabs(theta_resummed({1.0, 1.0}, 3) - theta_direct({1.0, 1.0})) < 1e-12);
    CHECK(theta_resummed({1.0, 10.0}, 0) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi / 10.0) - 0.5));
    // 0.5 sqrt(pi/10) - 0.5 to 12 digits (extended precision)
    CHECK(std::fabs(theta_resummed({1.0, 10.0}, 0) - (-0.219750439180104)) < 1e-14);
    const double small = theta_resummed({0.01, 1.0}, 0);
    CHECK(std::fabs(small - 8.362269) < 1e-6);
    CHECK(std::fabs(small - theta_direct({0.01, 1.0})) < 1e-12);
}

TEST_CASE("Jacobi identity with adaptive truncation") {
    for (double b : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        CAPTURE(b);
        CHECK(std::fabs(theta_direct({b, 1.0}) - theta_resummed_adaptive({b, 1.0})) <= 1e-12);
    }
    // beta and omega only enter as a product
    CHECK(theta_direct({2.0, 0.25}) == theta_direct({0.5, 1.0}));
}

TEST_CASE("gaussian_kernel") {
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(gaussian_kernel(0.0, 1.0) == doctest::Approx(inv).epsilon(1e-15));
    CHECK(gaussian_kernel(0.3, 0.3) == doctest::Approx(std::exp(-0.5) * inv / 0.3).epsilon(1e-15));
    // normalization by composite Simpson over +-12 sigma
    const double sigma = 0.7;
    const int n = 4000;
    const double lo = -12 * sigma, h = 24 * sigma / n;
    double s = gaussian_kernel(lo, sigma) + gaussian_kernel(-lo, sigma);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * gaussian_kernel(lo + i * h, sigma);
    CHECK(std::fabs(s * h / 3 - 1.0) < 1e-12);
}
