#include "reltrace/kinematics.hpp"

#include <cmath>

#include "reltrace/errors.hpp"

namespace reltrace {

void RelParams::validate() const {
    if (!(m > 0.0) || !(c > 0.0) || !(hbar > 0.0)) {
        throw DomainError("RelParams: m, c and hbar must be positive");
    }
    if (!std::isfinite(rest_energy())) {
        throw DomainError("RelParams: rest energy mc^2 is not representable");
    }
}

double pseudo_energy(double E, const RelParams& params) {
    const double mc2 = params.rest_energy();
    const double a = std::abs(E);
    return (a - mc2) * (a + mc2) / (2.0 * mc2);
}

double physical_energy(double eps, const RelParams& params, Branch branch) {
    const double mc2 = params.rest_energy();
    const double radicand = mc2 * (2.0 * eps + mc2);
    if (radicand < 0.0) {
        throw DomainError("sub-tachyonic pseudoenergy");
    }
    return static_cast<int>(branch) * std::sqrt(radicand);
}

double classical_momentum(double eps, const RelParams& params) {
    if (eps < 0.0) {
        throw DomainError("classical_momentum: negative pseudoenergy");
    }
    return std::sqrt(2.0 * params.m * eps);
}

}  // namespace reltrace
