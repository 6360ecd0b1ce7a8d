#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "reltrace/kinematics.hpp"
#include "reltrace/spectra.hpp"
#include "reltrace/trace_engine.hpp"

namespace reltrace::billiard {

/// Rectangular box with Dirichlet walls. `L` is the reference length used
/// to make the closed-form densities dimensionless; <= 0 means the
/// geometric mean of the sides.
struct BoxGeometry {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double L = 0.0;

    std::array<double, 3> sides() const { return {a1, a2, a3}; }
    double reference_length() const;
    double volume() const { return a1 * a2 * a3; }
    double surface() const { return 2.0 * (a1 * a2 + a2 * a3 + a1 * a3); }
    double edge_sum() const { return a1 + a2 + a3; }
    void validate() const;

    static BoxGeometry cube(double a) { return {a, a, a, 0.0}; }
};

/// E0 = pi^2 hbar^2 / (2 m L^2).
double box_energy_scale(const BoxGeometry& geom, const RelParams& params);

/// Quantum levels with pseudoenergy <= eps_max, sorted, degenerate levels
/// merged. The representative quantum numbers are the lexicographically
/// smallest triple of the multiplet.
std::vector<Level> exact_levels(const BoxGeometry& geom, const RelParams& params, double eps_max);

/// E(I) = (pi^2 / 2m) sum I_i^2 / a_i^2 with mu = (4, 4, 4).
class BilliardModel final : public HamiltonianModel {
public:
    BilliardModel(const BoxGeometry& geom, const RelParams& params);

    std::size_t dimension() const override { return 3; }
    std::vector<int> maslov() const override { return {4, 4, 4}; }
    double value(const Eigen::VectorXd& I) const override;
    Eigen::VectorXd gradient(const Eigen::VectorXd& I) const override;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& I) const override;
    /// (k1 a1^2, k2 a2^2, k3 a3^2): the exact saddle direction.
    Eigen::VectorXd ray_direction(const OrbitIndex& k) const override;

    const BoxGeometry& geometry() const { return geom_; }

private:
    BoxGeometry geom_;
    RelParams params_;
    std::array<double, 3> curvature_;  // pi^2 / (m a_i^2)
};

std::unique_ptr<BilliardModel> billiard_model(const BoxGeometry& geom, const RelParams& params);

/// p * 2 sqrt(sum k_i^2 a_i^2), the action of the periodic orbit k.
double eikonal(std::span<const int> k, double eps, const BoxGeometry& geom, const RelParams& params);

/// Analytic saddle: tau = sqrt(2m/eps) sqrt(sum (a_i k_i)^2),
/// I_i = 2 m a_i^2 k_i / (tau pi), nu = 2, residual 0.
SaddleSolution saddle_closed_form(const OrbitIndex& k, double eps, const BoxGeometry& geom,
                                  const RelParams& params);

/// Summand of the volume lattice sum for a single k:
/// (pi/4E0) sqrt(eps/E0) (a1 a2 a3/L^3) j0(S(k)/hbar), undamped.
double volume_summand(std::span<const int> k, double eps, const BoxGeometry& geom, const RelParams& params);

/// Sum over 0 < |k|_inf <= k_max of the volume lattice summand, each term
/// damped by exp(-tau(k)^2 sigma^2 / 2 hbar^2) when sigma > 0 and dropped
/// once that factor falls below 1e-10.
DensityGrid osc_density_closed(const BoxGeometry& geom, const RelParams& params, std::span<const double> eps_grid,
                               int k_max, double sigma);

/// Density of the face (i, j) (0-based axes): (pi/4E0)(a_i a_j / L^2)
/// sum_{|k1|,|k2|<=k_max} J0(S2/hbar), the k = (0,0) term included.
DensityGrid face_density(const BoxGeometry& geom, const RelParams& params, int i, int j,
                         std::span<const double> eps_grid, int k_max, double sigma);

/// Density of the edge i (0-based): a_i / (2 L sqrt(E0 eps)) sum_{|k|<=k_max} cos(S1/hbar),
/// S1 = p 2 k a_i.
DensityGrid edge_density(const BoxGeometry& geom, const RelParams& params, int i, std::span<const double> eps_grid,
                         int k_max, double sigma);

/// Smooth density: volume, surface and edge terms.
double tf_density_closed(const BoxGeometry& geom, const RelParams& params, double eps);

/// Leading (volume) term of tf_density_closed.
double tf_volume_term(const BoxGeometry& geom, const RelParams& params, double eps);

/// Family weights of the resummed partition-function product:
/// volume +1, faces -1/2, edges +1/4 (the constant -1/8 gives only delta(eps)).
inline constexpr double kFaceWeight = -0.5;
inline constexpr double kEdgeWeight = 0.25;

struct ResummedParts {
    DensityGrid total;
    std::vector<double> volume;  // smooth volume term + oscillating lattice sum
    std::vector<double> faces;   // weighted sum of the three faces
    std::vector<double> edges;   // weighted sum of the three edges
};

/// Exact level density assembled from the resummed partition function.
ResummedParts exact_resummed_parts(const BoxGeometry& geom, const RelParams& params,
                                   std::span<const double> eps_grid, int k_max, double sigma);

DensityGrid exact_resummed_density(const BoxGeometry& geom, const RelParams& params,
                                   std::span<const double> eps_grid, int k_max = 20, double sigma = 0.0);

}  // namespace reltrace::billiard
