#include "reltrace/trace_engine.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "reltrace/errors.hpp"
#include "reltrace/numeric.hpp"

namespace reltrace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegeneracyCutoff = 1e-12;
constexpr double kFrequencyConsistency = 1e-8;

std::vector<double> pack(const Eigen::VectorXd& I, double tau) {
    std::vector<double> out(I.data(), I.data() + I.size());
    out.push_back(tau);
    return out;
}

// sup{t >= 0 : f(t) <= level} for nondecreasing f with f(0) <= level.
template <class F>
double monotone_sup(F&& f, double level, double scale) {
    double lo = 0.0;
    double hi = scale > 0.0 ? scale : 1.0;
    int grow = 0;
    while (f(hi) <= level) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 2000) throw NumericalFailure("model does not reach the requested pseudoenergy");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) <= level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace

bool OrbitIndex::all_positive() const {
    if (k.empty()) return false;
    for (int v : k) {
        if (v < 1) return false;
    }
    return true;
}

bool OrbitIndex::is_zero() const {
    for (int v : k) {
        if (v != 0) return false;
    }
    return true;
}

Eigen::VectorXd OrbitIndex::as_vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) v[static_cast<Eigen::Index>(i)] = k[i];
    return v;
}

std::string OrbitIndex::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) os << ',';
        os << k[i];
    }
    os << ')';
    return os.str();
}

Eigen::VectorXd HamiltonianModel::ray_direction(const OrbitIndex& k) const { return k.as_vector(); }

SaddleGuess initial_guess(const HamiltonianModel& model, double eps, const OrbitIndex& k) {
    Eigen::VectorXd dir = model.ray_direction(k);
    dir /= dir.norm();
    const double t = monotone_sup([&](double s) { return model.value(s * dir); }, eps, 1.0);
    SaddleGuess guess;
    guess.I = t * dir;
    const Eigen::VectorXd w = model.gradient(guess.I);
    const double ww = w.squaredNorm();
    guess.tau = ww > 0.0 ? 2.0 * kPi * k.as_vector().dot(w) / ww : 1.0;
    if (!(guess.tau > 0.0)) guess.tau = 1.0;
    return guess;
}

StabilityData stability(const HamiltonianModel& model, const SaddleSolution& sol) {
    const Eigen::VectorXd w_orbit = 2.0 * kPi * sol.k.as_vector() / sol.tau_bar;
    const Eigen::VectorXd w_model = model.gradient(sol.I_bar);
    const double scale = w_orbit.cwiseAbs().maxCoeff();
    if ((w_model - w_orbit).cwiseAbs().maxCoeff() > kFrequencyConsistency * scale) {
        throw NumericalFailure("stability: frequencies at the saddle disagree with 2 pi k / tau",
                               pack(sol.I_bar, sol.tau_bar));
    }
    const Eigen::MatrixXd H = model.hessian(sol.I_bar);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
    const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (norm == 0.0 || eig.eigenvalues().cwiseAbs().minCoeff() <= kDegeneracyCutoff * norm) {
        throw DegenerateTorusError("stability: singular Hessian at orbit " + sol.k.to_string());
    }
    StabilityData out;
    out.detH = H.determinant();
    out.quad_form = w_orbit.dot(H.ldlt().solve(w_orbit));
    out.detM = out.detH * out.quad_form;
    return out;
}

int maslov_nu(const Eigen::MatrixXd& H, double quad_form) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const double norm = lam.cwiseAbs().maxCoeff();
    int n_plus = 0;
    int n_minus = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (norm == 0.0 || std::fabs(lam[i]) <= kDegeneracyCutoff * norm) {
            throw DegenerateTorusError("maslov_nu: Hessian has a zero eigenvalue");
        }
        if (lam[i] > 0.0) {
            ++n_plus;
        } else {
            ++n_minus;
        }
    }
    const int n_zero = quad_form > 0.0 ? 1 : 0;
    return n_plus - n_minus - n_zero;
}

SaddleSolution solve_saddle(const HamiltonianModel& model, double eps, const OrbitIndex& k,
                            const SaddleGuess& guess, const SolverOptions& opts) {
    const auto D = static_cast<Eigen::Index>(model.dimension());
    if (static_cast<Eigen::Index>(k.size()) != D || !k.all_positive()) {
        throw ContractError("solve_saddle: orbit index must have D components, all >= 1");
    }
    if (!(eps > 0.0)) throw DomainError("solve_saddle: pseudoenergy must be positive");
    if (guess.I.size() != D || (guess.I.array() <= 0.0).any() || !(guess.tau > 0.0)) {
        throw ContractError("solve_saddle: guess must lie in the positive orthant with tau > 0");
    }

    const Eigen::VectorXd two_pi_k = 2.0 * kPi * k.as_vector();
    const double target = opts.tol * (1.0 + std::fabs(eps));

    Eigen::VectorXd I = guess.I;
    double tau = guess.tau;
    Eigen::VectorXd F(D + 1);
    Eigen::MatrixXd J(D + 1, D + 1);

    auto residuals = [&](const Eigen::VectorXd& x, double t, Eigen::VectorXd& out) {
        const Eigen::VectorXd w = model.gradient(x);
        out.head(D) = two_pi_k - t * w;
        out[D] = eps - model.value(x);
        return out.cwiseAbs().maxCoeff();
    };

    double res = residuals(I, tau, F);
    int iter = 0;
    while (res > target) {
        if (iter >= opts.max_iter) {
            throw NumericalFailure("solve_saddle: no convergence for k=" + k.to_string() + " after " +
                                       std::to_string(opts.max_iter) + " iterations (residual " +
                                       std::to_string(res) + ")",
                                   pack(I, tau));
        }
        const Eigen::VectorXd w = model.gradient(I);
        J.topLeftCorner(D, D) = -tau * model.hessian(I);
        J.topRightCorner(D, 1) = -w;
        J.bottomLeftCorner(1, D) = -w.transpose();
        J(D, D) = 0.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) {
            throw DegenerateTorusError("solve_saddle: singular Newton matrix for k=" + k.to_string());
        }
        const Eigen::VectorXd step = lu.solve(-F);

        // Backtrack until the iterate stays inside the orthant with tau > 0.
        double lambda = 1.0;
        Eigen::VectorXd I_new;
        double tau_new = 0.0;
        for (int halvings = 0;; ++halvings) {
            I_new = I + lambda * step.head(D);
            tau_new = tau + lambda * step[D];
            if ((I_new.array() > 0.0).all() && tau_new > 0.0) break;
            if (halvings > 60) {
                throw NumericalFailure("solve_saddle: Newton step leaves the positive orthant", pack(I, tau));
            }
            lambda *= 0.5;
        }
        I = I_new;
        tau = tau_new;
        res = residuals(I, tau, F);
        ++iter;
    }

    SaddleSolution sol;
    sol.k = k;
    sol.I_bar = I;
    sol.tau_bar = tau;
    sol.omega = model.gradient(I);
    sol.H = model.hessian(I);
    sol.residual = res;
    sol.iterations = iter;
    sol.eikonal = two_pi_k.dot(I);
    const StabilityData st = stability(model, sol);
    sol.detH = st.detH;
    sol.quad_form = st.quad_form;
    sol.nu = maslov_nu(sol.H, sol.quad_form);
    return sol;
}

SaddleSolution solve_saddle(const HamiltonianModel& model, double eps, const OrbitIndex& k,
                            const SolverOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("solve_saddle: pseudoenergy must be positive");
    if (k.size() != model.dimension() || !k.all_positive()) {
        throw ContractError("solve_saddle: orbit index must have D components, all >= 1");
    }
    return solve_saddle(model, eps, k, initial_guess(model, eps, k), opts);
}

double orbit_term(const HamiltonianModel& model, const SaddleSolution& sol, const RelParams& params) {
    const StabilityData st = stability(model, sol);
    const double D = static_cast<double>(model.dimension());
    const double hbar = params.hbar;

    const double amplitude = 1.0 / (2.0 * kPi) * std::pow(2.0 * kPi / hbar, 0.5 * (D + 1.0)) *
                             std::pow(sol.tau_bar, -0.5 * (D - 1.0)) / std::sqrt(std::fabs(st.detM));

    // 2 pi k.mu/4 only matters modulo 2 pi: reduce the integer part exactly.
    const std::vector<int> mu = model.maslov();
    long k_dot_mu = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) k_dot_mu += static_cast<long>(sol.k.k[i]) * mu[i];
    const long maslov_quarter = ((k_dot_mu % 4) + 4) % 4;

    const double phase = sol.eikonal / hbar - 0.5 * kPi * static_cast<double>(maslov_quarter) -
                         0.25 * kPi * static_cast<double>(sol.nu);
    return amplitude * std::cos(phase);
}

DensityGrid oscillating_density(const HamiltonianModel& model, std::span<const double> eps_grid, int k_enum,
                                const RelParams& params, double sigma, const SolverOptions& opts) {
    require_increasing_grid(eps_grid);
    if (sigma < 0.0) throw DomainError("oscillating_density: sigma must be non-negative");
    if (eps_grid.front() <= 0.0) throw DomainError("oscillating_density: pseudoenergies must be positive");

    const std::size_t D = model.dimension();
    std::vector<OrbitIndex> orbits;
    if (k_enum >= 1) {
        OrbitIndex k{std::vector<int>(D, 1)};
        for (bool done = false; !done;) {
            orbits.push_back(k);
            done = true;
            for (std::size_t pos = D; pos-- > 0;) {
                if (k.k[pos] < k_enum) {
                    ++k.k[pos];
                    done = false;
                    break;
                }
                k.k[pos] = 1;
            }
        }
    }

    DensityGrid out;
    out.eps.assign(eps_grid.begin(), eps_grid.end());
    out.g.assign(eps_grid.size(), 0.0);
    out.meta.system = "trace-engine";
    out.meta.k_max = k_enum;
    out.meta.sigma = sigma;
    out.meta.parameters = {{"dimension", static_cast<double>(D)},
                           {"m", params.m},
                           {"c", params.c},
                           {"hbar", params.hbar},
                           {"orbits", static_cast<double>(orbits.size())}};

    std::vector<std::vector<std::string>> skipped(eps_grid.size());
    const double damp_scale = sigma / params.hbar;
    parallel_for(eps_grid.size(), [&](std::size_t i) {
        const double eps = eps_grid[i];
        CompensatedSum acc;
        for (const OrbitIndex& k : orbits) {
            try {
                const SaddleSolution sol = solve_saddle(model, eps, k, opts);
                double term = 2.0 * orbit_term(model, sol, params);
                if (sigma > 0.0) {
                    const double x = sol.tau_bar * damp_scale;
                    term *= std::exp(-0.5 * x * x);
                }
                acc.add(term);
            } catch (const NumericalFailure& e) {
                skipped[i].push_back("eps=" + std::to_string(eps) + " k=" + k.to_string() + ": " + e.what());
            } catch (const DegenerateTorusError& e) {
                skipped[i].push_back("eps=" + std::to_string(eps) + " k=" + k.to_string() + ": " + e.what());
            }
        }
        out.g[i] = acc.value();
    });
    for (auto& list : skipped) {
        for (auto& msg : list) out.meta.diagnostics.push_back(std::move(msg));
    }
    return out;
}

double phase_space_volume(const HamiltonianModel& model, double eps, const RelParams& params,
                          const QuadratureSpec& spec) {
    if (eps < 0.0) throw DomainError("phase_space_volume: negative pseudoenergy");
    const auto D = static_cast<Eigen::Index>(model.dimension());
    if (model.value(Eigen::VectorXd::Zero(D)) > eps) return 0.0;

    boost::math::quadrature::tanh_sinh<double> integrator;

    // Volume of the slice with the first `level` actions fixed by `I`.
    std::function<double(Eigen::Index, Eigen::VectorXd)> slice = [&](Eigen::Index level,
                                                                     Eigen::VectorXd I) -> double {
        auto along = [&](double t) {
            I[level] = t;
            return model.value(I);
        };
        I[level] = 0.0;
        if (model.value(I) > eps) return 0.0;
        const double upper = monotone_sup(along, eps, 1.0);
        if (level + 1 == D) return upper;
        if (upper <= 0.0) return 0.0;
        double err = 0.0;
        double l1 = 0.0;
        const double v = integrator.integrate(
            [&](double t) {
                Eigen::VectorXd J = I;
                J[level] = t;
                return slice(level + 1, J);
            },
            0.0, upper, spec.volume_tol, &err, &l1);
        // Inner slices near the surface are tiny and their relative error
        // means nothing; what they get wrong shows up in the outer estimate.
        if (level == 0 && err > 1e3 * spec.volume_tol * std::max(std::fabs(v), 1e-300)) {
            std::ostringstream os;
            os << "phase_space_volume: quadrature did not converge (error " << err << " on " << v << ")";
            throw NumericalFailure(os.str());
        }
        return v;
    };

    const double v = slice(0, Eigen::VectorXd::Zero(D));
    return v / std::pow(params.hbar, static_cast<double>(D));
}

double thomas_fermi_density(const HamiltonianModel& model, double eps, const RelParams& params,
                            const QuadratureSpec& spec) {
    if (eps < 0.0) throw DomainError("thomas_fermi_density: negative pseudoenergy");
    if (eps == 0.0) return 0.0;

    auto central = [&](double h) {
        return (phase_space_volume(model, eps + h, params, spec) -
                phase_space_volume(model, eps - h, params, spec)) /
               (2.0 * h);
    };
    const double h = spec.rel_step * eps;
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    const double d4 = central(0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d4 - d2) / 3.0;
    const double r = (16.0 * r2 - r1) / 15.0;
    if (std::fabs(r2 - r1) > spec.rel_tol * std::fabs(r)) {
        throw NumericalFailure("thomas_fermi_density: Richardson estimates disagree (" + std::to_string(r1) +
                               " vs " + std::to_string(r2) + ")");
    }
    return r;
}

}  // namespace reltrace
