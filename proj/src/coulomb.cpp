#include "reltrace/coulomb.hpp"

#include <cmath>
#include <string>

#include "reltrace/errors.hpp"

namespace reltrace::coulomb {

namespace {

// Effective principal number (n - l - 1/2) + sqrt((l + 1/2)^2 - alpha^2).
double effective_n(int n, int l, double alpha) {
    if (n < 1 || l < 0 || l >= n) {
        throw InvalidQuantumNumbers("coulomb: need n >= 1 and 0 <= l < n (got n=" + std::to_string(n) +
                                    ", l=" + std::to_string(l) + ")");
    }
    const double half_l = l + 0.5;
    const double radicand = (half_l - alpha) * (half_l + alpha);
    if (radicand <= 0.0) {
        throw CriticalCouplingError("coulomb: (l+1/2)^2 <= alpha^2, the particle falls to the center (l=" +
                                    std::to_string(l) + ")");
    }
    return (n - l - 0.5) + std::sqrt(radicand);
}

}  // namespace

void CoulombParams::validate() const {
    params.validate();
    if (!(alpha > 0.0) || !(alpha < 0.5)) throw DomainError("coulomb: coupling must satisfy 0 < alpha < 1/2");
}

double coulomb_pseudoenergy(int n, int l, double E, const CoulombParams& cp) {
    const double nu = effective_n(n, l, cp.alpha);
    const double mc2 = cp.params.rest_energy();
    const double x = cp.alpha / nu;
    return -0.5 * (E * E / mc2) * x * x;
}

double coulomb_energy(int n, int l, const CoulombParams& cp, Branch branch) {
    const double nu = effective_n(n, l, cp.alpha);
    const double x = cp.alpha / nu;
    return static_cast<int>(branch) * cp.params.rest_energy() / std::sqrt(1.0 + x * x);
}

std::vector<CoulombLevel> coulomb_spectrum(int n_max, const CoulombParams& cp) {
    cp.validate();
    std::vector<CoulombLevel> out;
    for (int n = 1; n <= n_max; ++n) {
        for (int l = 0; l < n; ++l) {
            CoulombLevel lv;
            lv.n = n;
            lv.l = l;
            lv.E = coulomb_energy(n, l, cp, Branch::Positive);
            lv.eps = coulomb_pseudoenergy(n, l, lv.E, cp);
            out.push_back(lv);
        }
    }
    return out;
}

}  // namespace reltrace::coulomb
