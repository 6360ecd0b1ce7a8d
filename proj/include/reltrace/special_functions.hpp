#pragma once

namespace reltrace {

/// Terms of a one-dimensional theta series are exp(-beta * omega * n^2).
struct ThetaParams {
    double beta = 1.0;
    double omega = 1.0;

    double exponent_scale() const { return beta * omega; }
};

/// Hard cap on the number of terms any truncated series may use.
inline constexpr long kMaxSeriesTerms = 1'000'000;

/// sin(x)/x, continuous through x = 0.
double sph_bessel_j0(double x);

/// Bessel function of the first kind, order zero.
///
/// |x| < 12 uses the power series in extended precision. Above that the
/// value comes from Miller's backward recurrence (normalized by
/// J0 + 2 sum J_2k = 1) up to |x| = 30 and from the Hankel asymptotic
/// expansion beyond. Absolute error stays below 1e-12 on |x| <= 1e4.
double bessel_J0(double x);

/// Sum over n >= 1 of exp(-beta omega n^2). Summation stops at the first
/// term below tol * partial_sum. Throws NumericalFailure past kMaxSeriesTerms.
double theta_direct(const ThetaParams& p, double tol = 1e-17);

/// Poisson-resummed form of theta_direct:
///   (1/2) sqrt(pi / (beta omega)) * sum_{|k| <= k_max} exp(-pi^2 k^2 / (beta omega)) - 1/2
double theta_resummed(const ThetaParams& p, int k_max);

/// theta_resummed with k_max chosen as the first k whose term drops below tol.
double theta_resummed_adaptive(const ThetaParams& p, double tol = 1e-17);

/// Normalized Gaussian exp(-x^2 / 2 sigma^2) / (sigma sqrt(2 pi)).
double gaussian_kernel(double x, double sigma);

namespace detail {
// Exposed so the tests can check that the branches overlap.
double bessel_J0_series(double x);
double bessel_J0_large(double x);
}  // namespace detail

}  // namespace reltrace
