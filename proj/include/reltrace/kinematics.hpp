#pragma once

#include <cstdint>
#include <vector>

namespace reltrace {

/// Unit system. Every computation is expressed in units of these three.
struct RelParams {
    double m = 1.0;
    double c = 10.0;
    double hbar = 1.0;

    double rest_energy() const { return m * c * c; }

    /// Throws DomainError unless m, c, hbar are positive and mc^2 is finite.
    void validate() const;
};

enum class Branch : int { Positive = 1, Negative = -1 };

/// One quantum level: quantum numbers, pseudoenergy, physical energy.
struct Level {
    std::vector<std::int64_t> n;
    double eps = 0.0;
    double E = 0.0;
    int degeneracy = 1;
};

/// (E^2 - m^2 c^4) / (2 m c^2), evaluated as (E - mc^2)(E + mc^2) / 2mc^2
/// so bound states close to the rest energy keep full relative precision.
double pseudo_energy(double E, const RelParams& params);

/// Inverse of pseudo_energy on the chosen branch.
/// Throws DomainError("sub-tachyonic pseudoenergy") when 2mc^2 eps + m^2c^4 < 0.
double physical_energy(double eps, const RelParams& params, Branch branch = Branch::Positive);

/// sqrt(2 m eps); equals sqrt(E^2 - m^2c^4)/c. Throws DomainError for eps < 0.
double classical_momentum(double eps, const RelParams& params);

}  // namespace reltrace
