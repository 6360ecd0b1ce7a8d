#include "reltrace/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "reltrace/errors.hpp"

namespace reltrace {

namespace {

constexpr double kSeriesBoundary = 12.0;
constexpr double kRecurrenceBoundary = 30.0;

long double bessel_J0_miller(long double x) {
    // Start well above x so the recurrence has settled onto the minimal solution.
    int start = 2 * (static_cast<int>(x / 2.0L) + 30);
    long double next = 0.0L;     // J_{k+1}
    long double current = 1e-30L;  // J_k
    long double norm = 0.0L;
    for (int k = start; k > 0; --k) {
        const long double prev = (2.0L * k / x) * current - next;
        next = current;
        current = prev;
        if ((k - 1) % 2 == 0 && k - 1 > 0) {
            norm += 2.0L * current;
        }
        if (std::fabs(current) > 1e250L) {
            current *= 1e-250L;
            next *= 1e-250L;
            norm *= 1e-250L;
        }
    }
    norm += current;
    return current / norm;
}

long double bessel_J0_hankel(long double x) {
    // a_k = prod_{j=1..k} (2j-1)^2 / (k! 8^k); P and Q take the even and odd terms.
    long double p = 1.0L;
    long double q = 0.0L;
    long double term = 1.0L;
    long double last = 1.0L;
    for (int k = 1; k < 200; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        term *= -odd * odd / (8.0L * k * x);
        const long double mag = std::fabs(term);
        if (mag > last) break;  // asymptotic series started to diverge
        last = mag;
        // term carries (-1)^k a_k / x^k; every other sign is absorbed by P/Q.
        if (k % 2 == 1) {
            q += (k % 4 == 1 ? 1.0L : -1.0L) * term;
        } else {
            p += (k % 4 == 0 ? 1.0L : -1.0L) * term;
        }
        if (mag < 1e-20L) break;
    }
    const long double s = std::sin(x);
    const long double c = std::cos(x);
    const long double inv_sqrt2 = 0.70710678118654752440084436210484903928L;
    const long double cos_chi = (c + s) * inv_sqrt2;
    const long double sin_chi = (s - c) * inv_sqrt2;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
    return amp * (p * cos_chi - q * sin_chi);
}

}  // namespace

namespace detail {

double bessel_J0_series(double xd) {
    const long double x = xd;
    const long double z = -0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= z / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-22L && k > std::fabs(z)) break;
    }
    return static_cast<double>(sum);
}

double bessel_J0_large(double xd) {
    const long double x = std::fabs(static_cast<long double>(xd));
    if (x < kRecurrenceBoundary) {
        return static_cast<double>(bessel_J0_miller(x));
    }
    return static_cast<double>(bessel_J0_hankel(x));
}

}  // namespace detail

double sph_bessel_j0(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double bessel_J0(double x) {
    const double ax = std::fabs(x);
    if (ax < kSeriesBoundary) {
        return detail::bessel_J0_series(ax);
    }
    return detail::bessel_J0_large(ax);
}

double theta_direct(const ThetaParams& p, double tol) {
    const double b = p.exponent_scale();
    double sum = 0.0;
    for (long n = 1; n <= kMaxSeriesTerms; ++n) {
        const double nn = static_cast<double>(n);
        const double term = std::exp(-b * nn * nn);
        if (term == 0.0 || term < tol * sum) {
            return sum;
        }
        sum += term;
    }
    throw NumericalFailure("theta_direct: no convergence within " + std::to_string(kMaxSeriesTerms) +
                           " terms (beta*omega=" + std::to_string(b) + ")");
}

double theta_resummed(const ThetaParams& p, int k_max) {
    const double b = p.exponent_scale();
    constexpr double pi = std::numbers::pi;
    // smallest terms first
    double tail = 0.0;
    for (int k = k_max; k >= 1; --k) {
        const double kk = static_cast<double>(k);
        tail += std::exp(-pi * pi * kk * kk / b);
    }
    return 0.5 * std::sqrt(pi / b) * (1.0 + 2.0 * tail) - 0.5;
}

double theta_resummed_adaptive(const ThetaParams& p, double tol) {
    const double b = p.exponent_scale();
    constexpr double pi = std::numbers::pi;
    for (long k = 1; k <= kMaxSeriesTerms; ++k) {
        const double kk = static_cast<double>(k);
        if (std::exp(-pi * pi * kk * kk / b) < tol) {
            return theta_resummed(p, static_cast<int>(k - 1));
        }
    }
    throw NumericalFailure("theta_resummed_adaptive: no convergence within " +
                           std::to_string(kMaxSeriesTerms) + " terms");
}

double gaussian_kernel(double x, double sigma) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267793994605993438;
    const double u = x / sigma;
    return inv_sqrt_2pi / sigma * std::exp(-0.5 * u * u);
}

}  // namespace reltrace
