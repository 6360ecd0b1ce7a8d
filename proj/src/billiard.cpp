#include "reltrace/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "reltrace/errors.hpp"
#include "reltrace/numeric.hpp"
#include "reltrace/special_functions.hpp"

namespace reltrace::billiard {

namespace {

constexpr double kPi = std::numbers::pi;
// Terms whose Gaussian damping factor is below this are dropped.
constexpr double kDampingFloor = 1e-10;
constexpr double kMergeTolerance = 1e-12;

// Largest tau*sigma/hbar that still passes the damping floor.
const double kDampingReach = std::sqrt(-2.0 * std::log(kDampingFloor));

double damping(double tau, double sigma, double hbar) {
    if (sigma <= 0.0) return 1.0;
    const double x = tau * sigma / hbar;
    return std::exp(-0.5 * x * x);
}

bool beyond_reach(double tau, double sigma, double hbar) {
    return sigma > 0.0 && tau * sigma / hbar > kDampingReach;
}

int sign_weight(int nonzero) { return 1 << nonzero; }

DensityGrid make_grid(std::span<const double> eps_grid, std::string system, const BoxGeometry& geom,
                      const RelParams& params, int k_max, double sigma) {
    require_increasing_grid(eps_grid);
    DensityGrid out;
    out.eps.assign(eps_grid.begin(), eps_grid.end());
    out.g.assign(eps_grid.size(), 0.0);
    out.meta.system = std::move(system);
    out.meta.k_max = k_max;
    out.meta.sigma = sigma;
    out.meta.parameters = {{"a1", geom.a1},         {"a2", geom.a2}, {"a3", geom.a3},
                           {"L", geom.reference_length()}, {"m", params.m}, {"c", params.c},
                           {"hbar", params.hbar}};
    if (sigma > 0.0) out.meta.parameters["damping_floor"] = kDampingFloor;
    return out;
}

void require_positive(std::span<const double> eps_grid, const char* who) {
    if (!eps_grid.empty() && eps_grid.front() <= 0.0) {
        throw DomainError(std::string(who) + ": pseudoenergies must be positive");
    }
}

}  // namespace

double BoxGeometry::reference_length() const { return L > 0.0 ? L : std::cbrt(a1 * a2 * a3); }

void BoxGeometry::validate() const {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) throw DomainError("box sides must be positive");
    if (L < 0.0) throw DomainError("box reference length must be positive");
}

double box_energy_scale(const BoxGeometry& geom, const RelParams& params) {
    const double L = geom.reference_length();
    return kPi * kPi * params.hbar * params.hbar / (2.0 * params.m * L * L);
}

std::vector<Level> exact_levels(const BoxGeometry& geom, const RelParams& params, double eps_max) {
    geom.validate();
    params.validate();
    const auto a = geom.sides();
    const double unit = params.hbar * params.hbar * kPi * kPi / (2.0 * params.m);

    std::array<std::int64_t, 3> n_max{};
    for (int i = 0; i < 3; ++i) {
        n_max[i] = eps_max > 0.0 ? static_cast<std::int64_t>(a[i] * std::sqrt(eps_max / unit)) + 1 : 0;
    }

    std::vector<Level> raw;
    for (std::int64_t n1 = 1; n1 <= n_max[0]; ++n1) {
        for (std::int64_t n2 = 1; n2 <= n_max[1]; ++n2) {
            for (std::int64_t n3 = 1; n3 <= n_max[2]; ++n3) {
                const double q = static_cast<double>(n1 * n1) / (a[0] * a[0]) +
                                 static_cast<double>(n2 * n2) / (a[1] * a[1]) +
                                 static_cast<double>(n3 * n3) / (a[2] * a[2]);
                const double eps = unit * q;
                if (eps > eps_max) break;
                raw.push_back(Level{{n1, n2, n3}, eps, 0.0, 1});
            }
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Level& x, const Level& y) {
        return x.eps != y.eps ? x.eps < y.eps : x.n < y.n;
    });

    std::vector<Level> merged;
    for (Level& lv : raw) {
        if (!merged.empty() && std::fabs(lv.eps - merged.back().eps) <= kMergeTolerance * merged.back().eps) {
            Level& head = merged.back();
            head.degeneracy += 1;
            if (lv.n < head.n) head.n = lv.n;
            continue;
        }
        merged.push_back(std::move(lv));
    }
    for (Level& lv : merged) lv.E = physical_energy(lv.eps, params, Branch::Positive);
    return merged;
}

BilliardModel::BilliardModel(const BoxGeometry& geom, const RelParams& params) : geom_(geom), params_(params) {
    geom_.validate();
    params_.validate();
    const auto a = geom_.sides();
    for (int i = 0; i < 3; ++i) curvature_[i] = kPi * kPi / (params_.m * a[i] * a[i]);
}

double BilliardModel::value(const Eigen::VectorXd& I) const {
    return 0.5 * (curvature_[0] * I[0] * I[0] + curvature_[1] * I[1] * I[1] + curvature_[2] * I[2] * I[2]);
}

Eigen::VectorXd BilliardModel::gradient(const Eigen::VectorXd& I) const {
    Eigen::VectorXd w(3);
    for (int i = 0; i < 3; ++i) w[i] = curvature_[i] * I[i];
    return w;
}

Eigen::MatrixXd BilliardModel::hessian(const Eigen::VectorXd&) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) H(i, i) = curvature_[i];
    return H;
}

Eigen::VectorXd BilliardModel::ray_direction(const OrbitIndex& k) const {
    const auto a = geom_.sides();
    Eigen::VectorXd d(3);
    for (int i = 0; i < 3; ++i) d[i] = k.k[i] * a[i] * a[i];
    return d;
}

std::unique_ptr<BilliardModel> billiard_model(const BoxGeometry& geom, const RelParams& params) {
    return std::make_unique<BilliardModel>(geom, params);
}

double eikonal(std::span<const int> k, double eps, const BoxGeometry& geom, const RelParams& params) {
    if (eps < 0.0) throw DomainError("eikonal: negative pseudoenergy");
    if (k.size() != 3) throw ContractError("eikonal: orbit index must have three components");
    const auto a = geom.sides();
    double r2 = 0.0;
    for (int i = 0; i < 3; ++i) r2 += (k[i] * a[i]) * (k[i] * a[i]);
    return classical_momentum(eps, params) * 2.0 * std::sqrt(r2);
}

SaddleSolution saddle_closed_form(const OrbitIndex& k, double eps, const BoxGeometry& geom,
                                  const RelParams& params) {
    if (k.size() != 3 || !k.all_positive()) throw ContractError("saddle_closed_form: need k_i >= 1");
    if (!(eps > 0.0)) throw DomainError("saddle_closed_form: pseudoenergy must be positive");
    const auto a = geom.sides();
    const double m = params.m;

    double r2 = 0.0;
    for (int i = 0; i < 3; ++i) r2 += (a[i] * k.k[i]) * (a[i] * k.k[i]);

    SaddleSolution sol;
    sol.k = k;
    sol.tau_bar = std::sqrt(2.0 * m / eps) * std::sqrt(r2);
    sol.I_bar.resize(3);
    sol.omega.resize(3);
    sol.H = Eigen::MatrixXd::Zero(3, 3);
    double quad = 0.0;
    double eik = 0.0;
    for (int i = 0; i < 3; ++i) {
        sol.I_bar[i] = 2.0 * m * a[i] * a[i] * k.k[i] / (sol.tau_bar * kPi);
        sol.H(i, i) = kPi * kPi / (m * a[i] * a[i]);
        sol.omega[i] = 2.0 * kPi * k.k[i] / sol.tau_bar;
        quad += sol.omega[i] * sol.omega[i] / sol.H(i, i);
        eik += 2.0 * kPi * k.k[i] * sol.I_bar[i];
    }
    sol.detH = std::pow(kPi, 6) / (m * m * m * a[0] * a[0] * a[1] * a[1] * a[2] * a[2]);
    sol.quad_form = quad;
    sol.nu = maslov_nu(sol.H, sol.quad_form);
    sol.eikonal = eik;
    sol.residual = 0.0;
    return sol;
}

double volume_summand(std::span<const int> k, double eps, const BoxGeometry& geom, const RelParams& params) {
    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    const double pref = kPi / (4.0 * E0) * std::sqrt(eps / E0) * geom.volume() / (L * L * L);
    return pref * sph_bessel_j0(eikonal(k, eps, geom, params) / params.hbar);
}

DensityGrid osc_density_closed(const BoxGeometry& geom, const RelParams& params, std::span<const double> eps_grid,
                               int k_max, double sigma) {
    geom.validate();
    require_positive(eps_grid, "osc_density_closed");
    if (sigma < 0.0) throw DomainError("osc_density_closed: sigma must be non-negative");
    DensityGrid out = make_grid(eps_grid, "billiard-volume-oscillating", geom, params, k_max, sigma);

    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    const auto a = geom.sides();
    const double hbar = params.hbar;

    parallel_for(eps_grid.size(), [&](std::size_t idx) {
        const double eps = eps_grid[idx];
        const double pref = kPi / (4.0 * E0) * std::sqrt(eps / E0) * geom.volume() / (L * L * L);
        const double p2 = 2.0 * classical_momentum(eps, params) / hbar;  // S = p2 * hbar * R
        const double tau_per_R = std::sqrt(2.0 * params.m / eps);
        CompensatedSum acc;
        for (int k1 = 0; k1 <= k_max; ++k1) {
            const double r1 = (k1 * a[0]) * (k1 * a[0]);
            if (beyond_reach(tau_per_R * std::sqrt(r1), sigma, hbar)) break;
            for (int k2 = 0; k2 <= k_max; ++k2) {
                const double r12 = r1 + (k2 * a[1]) * (k2 * a[1]);
                if (beyond_reach(tau_per_R * std::sqrt(r12), sigma, hbar)) break;
                for (int k3 = 0; k3 <= k_max; ++k3) {
                    if (k1 == 0 && k2 == 0 && k3 == 0) continue;
                    const double R = std::sqrt(r12 + (k3 * a[2]) * (k3 * a[2]));
                    const double tau = tau_per_R * R;
                    if (beyond_reach(tau, sigma, hbar)) break;
                    const int weight = sign_weight((k1 != 0) + (k2 != 0) + (k3 != 0));
                    acc.add(weight * sph_bessel_j0(p2 * R) * damping(tau, sigma, hbar));
                }
            }
        }
        out.g[idx] = pref * acc.value();
    });
    return out;
}

DensityGrid face_density(const BoxGeometry& geom, const RelParams& params, int i, int j,
                         std::span<const double> eps_grid, int k_max, double sigma) {
    geom.validate();
    if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) throw ContractError("face_density: invalid axis pair");
    require_positive(eps_grid, "face_density");
    if (sigma < 0.0) throw DomainError("face_density: sigma must be non-negative");
    DensityGrid out = make_grid(eps_grid, "billiard-face", geom, params, k_max, sigma);
    out.meta.parameters["axis_i"] = i;
    out.meta.parameters["axis_j"] = j;

    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    const auto a = geom.sides();
    const double ai = a[i];
    const double aj = a[j];
    const double hbar = params.hbar;
    const double pref = kPi / (4.0 * E0) * ai * aj / (L * L);

    parallel_for(eps_grid.size(), [&](std::size_t idx) {
        const double eps = eps_grid[idx];
        const double p2 = 2.0 * classical_momentum(eps, params) / hbar;
        const double tau_per_R = std::sqrt(2.0 * params.m / eps);
        CompensatedSum acc;
        for (int k1 = 0; k1 <= k_max; ++k1) {
            const double r1 = (k1 * ai) * (k1 * ai);
            if (beyond_reach(tau_per_R * std::sqrt(r1), sigma, hbar)) break;
            for (int k2 = 0; k2 <= k_max; ++k2) {
                const double R = std::sqrt(r1 + (k2 * aj) * (k2 * aj));
                const double tau = tau_per_R * R;
                if (beyond_reach(tau, sigma, hbar)) break;
                const int weight = sign_weight((k1 != 0) + (k2 != 0));
                acc.add(weight * bessel_J0(p2 * R) * damping(tau, sigma, hbar));
            }
        }
        out.g[idx] = pref * acc.value();
    });
    return out;
}

DensityGrid edge_density(const BoxGeometry& geom, const RelParams& params, int i, std::span<const double> eps_grid,
                         int k_max, double sigma) {
    geom.validate();
    if (i < 0 || i > 2) throw ContractError("edge_density: invalid axis");
    require_positive(eps_grid, "edge_density");
    if (sigma < 0.0) throw DomainError("edge_density: sigma must be non-negative");
    DensityGrid out = make_grid(eps_grid, "billiard-edge", geom, params, k_max, sigma);
    out.meta.parameters["axis"] = i;

    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    const double ai = geom.sides()[i];
    const double hbar = params.hbar;

    parallel_for(eps_grid.size(), [&](std::size_t idx) {
        const double eps = eps_grid[idx];
        const double pref = ai / (2.0 * L * std::sqrt(E0 * eps));
        const double p2 = 2.0 * classical_momentum(eps, params) / hbar;
        const double tau_per_R = std::sqrt(2.0 * params.m / eps);
        CompensatedSum acc;
        acc.add(1.0);
        for (int k = 1; k <= k_max; ++k) {
            const double R = k * ai;
            const double tau = tau_per_R * R;
            if (beyond_reach(tau, sigma, hbar)) break;
            acc.add(2.0 * std::cos(p2 * R) * damping(tau, sigma, hbar));
        }
        out.g[idx] = pref * acc.value();
    });
    return out;
}

double tf_volume_term(const BoxGeometry& geom, const RelParams& params, double eps) {
    if (!(eps > 0.0)) throw DomainError("tf_density_closed: pseudoenergy must be positive");
    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    return (kPi / 4.0) * std::sqrt(eps / E0) * geom.volume() / (L * L * L) / E0;
}

double tf_density_closed(const BoxGeometry& geom, const RelParams& params, double eps) {
    geom.validate();
    if (!(eps > 0.0)) throw DomainError("tf_density_closed: pseudoenergy must be positive");
    const double E0 = box_energy_scale(geom, params);
    const double L = geom.reference_length();
    const double volume = (kPi / 4.0) * std::sqrt(eps / E0) * geom.volume() / (L * L * L);
    const double surface = (kPi / 8.0) * geom.surface() / (2.0 * L * L);
    const double edges = 0.125 * std::sqrt(E0 / eps) * geom.edge_sum() / L;
    return (volume - surface + edges) / E0;
}

ResummedParts exact_resummed_parts(const BoxGeometry& geom, const RelParams& params,
                                   std::span<const double> eps_grid, int k_max, double sigma) {
    geom.validate();
    require_positive(eps_grid, "exact_resummed_density");
    if (k_max < 0) throw ContractError("exact_resummed_density: k_max must be non-negative");

    const DensityGrid osc = osc_density_closed(geom, params, eps_grid, k_max, sigma);
    const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
    std::vector<DensityGrid> faces;
    std::vector<DensityGrid> edges;
    for (const auto& [i, j] : pairs) faces.push_back(face_density(geom, params, i, j, eps_grid, k_max, sigma));
    for (int i = 0; i < 3; ++i) edges.push_back(edge_density(geom, params, i, eps_grid, k_max, sigma));

    ResummedParts parts;
    const std::size_t n = eps_grid.size();
    parts.volume.resize(n);
    parts.faces.resize(n);
    parts.edges.resize(n);
    parts.total = make_grid(eps_grid, "billiard-exact-resummed", geom, params, k_max, sigma);
    parts.total.meta.parameters["face_weight"] = kFaceWeight;
    parts.total.meta.parameters["edge_weight"] = kEdgeWeight;
    for (std::size_t idx = 0; idx < n; ++idx) {
        parts.volume[idx] = tf_volume_term(geom, params, eps_grid[idx]) + osc.g[idx];
        parts.faces[idx] = kFaceWeight * (faces[0].g[idx] + faces[1].g[idx] + faces[2].g[idx]);
        parts.edges[idx] = kEdgeWeight * (edges[0].g[idx] + edges[1].g[idx] + edges[2].g[idx]);
        parts.total.g[idx] = parts.volume[idx] + parts.faces[idx] + parts.edges[idx];
    }
    return parts;
}

DensityGrid exact_resummed_density(const BoxGeometry& geom, const RelParams& params,
                                   std::span<const double> eps_grid, int k_max, double sigma) {
    return exact_resummed_parts(geom, params, eps_grid, k_max, sigma).total;
}

}  // namespace reltrace::billiard
