#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "reltrace/kinematics.hpp"
#include "reltrace/spectra.hpp"

namespace reltrace {

/// Winding numbers of a periodic orbit around the D torus cycles.
struct OrbitIndex {
    std::vector<int> k;

    std::size_t size() const { return k.size(); }
    bool all_positive() const;
    bool is_zero() const;
    Eigen::VectorXd as_vector() const;
    std::string to_string() const;
};

/// An integrable system written in action variables: the pseudoenergy
/// surface E(I), its gradient (the frequencies) and its Hessian, plus the
/// Maslov vector mu of the quantization condition I = (n + mu/4) hbar.
///
/// Implementations must be immutable after construction; the engine calls
/// them from several threads at once.
class HamiltonianModel {
public:
    virtual ~HamiltonianModel() = default;

    virtual std::size_t dimension() const = 0;
    virtual std::vector<int> maslov() const = 0;
    virtual double value(const Eigen::VectorXd& I) const = 0;
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd& I) const = 0;
    virtual Eigen::MatrixXd hessian(const Eigen::VectorXd& I) const = 0;

    /// Direction in action space along which the Newton start is placed
    /// for orbit k. Defaults to k itself.
    virtual Eigen::VectorXd ray_direction(const OrbitIndex& k) const;
};

struct SaddleGuess {
    Eigen::VectorXd I;
    double tau = 0.0;
};

/// One periodic orbit: the stationary point of
/// 2 pi k.I + tau (eps - E(I)) and the second-order data around it.
struct SaddleSolution {
    OrbitIndex k;
    Eigen::VectorXd I_bar;
    double tau_bar = 0.0;
    Eigen::VectorXd omega;  // gradient at I_bar
    Eigen::MatrixXd H;
    double detH = 0.0;
    double quad_form = 0.0;  // omega^T H^-1 omega
    int nu = 0;
    double eikonal = 0.0;  // 2 pi k.I_bar
    double residual = 0.0;
    int iterations = 0;
};

struct StabilityData {
    double detH = 0.0;
    double quad_form = 0.0;
    double detM = 0.0;
};

struct SolverOptions {
    double tol = 1e-12;
    int max_iter = 50;
};

/// Newton start: I along ray_direction(k) scaled by bisection so that
/// E(I) = eps, tau from the least-squares fit of 2 pi k = tau omega.
SaddleGuess initial_guess(const HamiltonianModel& model, double eps, const OrbitIndex& k);

/// Newton iteration on the D+1 stationarity conditions
///   2 pi k_i - tau omega_i(I) = 0,   eps - E(I) = 0.
/// Throws NumericalFailure (with the last iterate) on non-convergence and
/// DegenerateTorusError if the Newton matrix or the Hessian is singular.
SaddleSolution solve_saddle(const HamiltonianModel& model, double eps, const OrbitIndex& k,
                            const SaddleGuess& guess, const SolverOptions& opts = {});

/// solve_saddle started from initial_guess.
SaddleSolution solve_saddle(const HamiltonianModel& model, double eps, const OrbitIndex& k,
                            const SolverOptions& opts = {});

/// det M = det H * omega^T H^-1 omega, with omega = 2 pi k / tau_bar
/// cross-checked against the model gradient.
StabilityData stability(const HamiltonianModel& model, const SaddleSolution& sol);

/// nu = N+ - N- - N0 with N0 = 1 when the quadratic form is positive.
/// Eigenvalues within 1e-12 ||H|| of zero raise DegenerateTorusError.
int maslov_nu(const Eigen::MatrixXd& H, double quad_form);

/// Contribution of a single k (without its -k partner) to the oscillating
/// density:
///   (1/2pi) (2pi/hbar)^((D+1)/2) tau^(-(D-1)/2) |detH q|^(-1/2)
///     * cos(2 pi k.(I/hbar - mu/4) - pi nu / 4)
double orbit_term(const HamiltonianModel& model, const SaddleSolution& sol, const RelParams& params);

/// Sum of 2 * orbit_term over every k with 1 <= k_i <= k_enum, in
/// lexicographic order, each damped by exp(-tau^2 sigma^2 / 2 hbar^2) when
/// sigma > 0. Orbits whose saddle fails are skipped and listed in
/// meta.diagnostics.
DensityGrid oscillating_density(const HamiltonianModel& model, std::span<const double> eps_grid, int k_enum,
                                const RelParams& params, double sigma, const SolverOptions& opts = {});

struct QuadratureSpec {
    /// Relative tolerance on each phase-space volume.
    double volume_tol = 1e-12;
    /// Finite-difference step as a fraction of eps.
    double rel_step = 1e-2;
    /// Required agreement of successive Richardson estimates.
    double rel_tol = 1e-6;
};

/// Phase-space counting volume hbar^-D Vol{I >= 0 : E(I) <= eps}. The model
/// must be nondecreasing in every action on the positive orthant.
double phase_space_volume(const HamiltonianModel& model, double eps, const RelParams& params,
                          const QuadratureSpec& spec = {});

/// Smooth (k = 0) density d/deps of phase_space_volume, by Richardson
/// extrapolated central differences.
double thomas_fermi_density(const HamiltonianModel& model, double eps, const RelParams& params,
                            const QuadratureSpec& spec = {});

}  // namespace reltrace
