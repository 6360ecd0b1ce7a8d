#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "reltrace/errors.hpp"
#include "reltrace/kinematics.hpp"

using namespace reltrace;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }
}  // namespace

TEST_CASE("pseudo_energy vanishes at the rest energy on both branches") {
    const RelParams p{1.0, 10.0, 1.0};
    CHECK(pseudo_energy(100.0, p) == 0.0);
    CHECK(pseudo_energy(-100.0, p) == 0.0);
    const RelParams unit{1.0, 1.0, 1.0};
    CHECK(pseudo_energy(std::sqrt(3.0), unit) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("physical_energy examples") {
    const RelParams unit{1.0, 1.0, 1.0};
    CHECK(physical_energy(0.0, unit) == 1.0);
    CHECK(physical_energy(1.0, unit) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(physical_energy(1.0, unit, Branch::Negative) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    // cube level (1,1,1) at c = 10
    const RelParams p{1.0, 10.0, 1.0};
    CHECK(rel(physical_energy(1.5, p), 101.488915650922) < 1e-13);
    CHECK(rel(physical_energy(1.5, p), std::sqrt(10300.0)) < 1e-15);
}

TEST_CASE("physical_energy rejects sub-tachyonic pseudoenergies") {
    const RelParams p{1.0, 10.0, 1.0};
    CHECK_NOTHROW(physical_energy(-50.0, p));
    CHECK_THROWS_AS(physical_energy(-50.0001, p), DomainError);
    CHECK_THROWS_WITH(physical_energy(-60.0, p), "sub-tachyonic pseudoenergy");
}

TEST_CASE("classical_momentum") {
    const RelParams p{1.0, 10.0, 1.0};
    CHECK(classical_momentum(0.0, p) == 0.0);
    CHECK(classical_momentum(50.0, p) == doctest::Approx(10.0).epsilon(1e-15));
    const double E = std::sqrt(10300.0);
    CHECK(rel(classical_momentum(pseudo_energy(E, p), p), std::sqrt(3.0)) < 1e-13);
    CHECK_THROWS_AS(classical_momentum(-1.0, p), DomainError);
}

TEST_CASE("RelParams validation") {
    CHECK_NOTHROW(RelParams{}.validate());
    CHECK_THROWS_AS((RelParams{0.0, 1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((RelParams{1.0, -1.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((RelParams{1.0, 1.0, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((RelParams{1.0, 1e200, 1.0}.validate()), DomainError);
}

TEST_CASE("property: roundtrip, monotonicity and momentum identity") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> logc(0.0, 3.0);
    std::uniform_real_distribution<double> logm(-1.0, 1.0);
    std::uniform_real_distribution<double> excess(1e-6, 50.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const RelParams p{std::pow(10.0, logm(rng)), std::pow(10.0, logc(rng)), 1.0};
        const double mc2 = p.rest_energy();
        const double E = mc2 * (1.0 + excess(rng));
        const double eps = pseudo_energy(E, p);
        REQUIRE(rel(physical_energy(eps, p), E) < 1e-12);
        REQUIRE(pseudo_energy(E * (1.0 + 1e-9), p) > eps);
        const double direct = std::sqrt((E - mc2) * (E + mc2));
        REQUIRE(rel(classical_momentum(eps, p) * p.c, direct) < 1e-12);
    }
}

TEST_CASE("nonrelativistic limit of the kinetic energy") {
    for (double c : {10.0, 100.0, 1000.0}) {
        const RelParams p{1.0, c, 1.0};
        const double mc2 = p.rest_energy();
        for (double eps : {0.5, 1.5, 10.0, 30.0}) {
            const double kinetic = physical_energy(eps, p) - mc2;
            // alternating series bound plus the rounding of E itself
            const double bound = eps * eps / (2.0 * mc2) + 4.0 * std::numeric_limits<double>::epsilon() * mc2;
            CHECK(std::fabs(kinetic - eps) <= bound);
        }
    }
}
