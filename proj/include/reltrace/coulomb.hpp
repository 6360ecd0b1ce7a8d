#pragma once

#include <vector>

#include "reltrace/kinematics.hpp"

namespace reltrace::coulomb {

/// Fine-structure constant (CODATA 2018).
inline constexpr double kFineStructure = 7.2973525693e-3;

struct CoulombParams {
    double alpha = kFineStructure;
    RelParams params;

    /// Requires 0 < alpha < 1/2 so every l-wave, including l = 0, is bound.
    void validate() const;
};

/// Pseudoenergy of the (n, l) Klein-Gordon Coulomb level at trial energy E:
///   -(E^2 / mc^2)/2 * alpha^2 / [(n - l - 1/2) + sqrt((l + 1/2)^2 - alpha^2)]^2
/// Throws InvalidQuantumNumbers unless n >= 1 and 0 <= l < n, and
/// CriticalCouplingError when (l + 1/2)^2 <= alpha^2.
double coulomb_pseudoenergy(int n, int l, double E, const CoulombParams& cp);

/// Closed-form bound energy of (n, l) on the chosen branch.
double coulomb_energy(int n, int l, const CoulombParams& cp, Branch branch = Branch::Positive);

struct CoulombLevel {
    int n = 0;
    int l = 0;
    double E = 0.0;
    double eps = 0.0;
};

/// Every (n, l) with 1 <= n <= n_max, 0 <= l < n, ordered by n then l.
std::vector<CoulombLevel> coulomb_spectrum(int n_max, const CoulombParams& cp);

}  // namespace reltrace::coulomb
