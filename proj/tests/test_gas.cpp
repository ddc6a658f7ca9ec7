#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "transonic/gas.hpp"

using namespace transonic;

namespace {
const GasModel fixture{1.4, 2.5};

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
}  // namespace

TEST_CASE("model invariants enforced at construction") {
    CHECK_THROWS_AS(GasModel(1.0, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(GasModel(0.9, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(GasModel(1.4, -2.6), std::invalid_argument);  // 1+(g-1)b0 < 0
    CHECK_NOTHROW(GasModel(1.4, -2.4));
    CHECK_NOTHROW(GasModel(3.0, 0.1));
}

TEST_CASE("density from speed: closed-form values") {
    // rho(0) = 2^2.5, rho(c*) = (5/3)^2.5 for gamma=1.4, b0=2.5
    CHECK(close(density_from_speed(fixture, 0.0), 5.6568542494923806, 1e-13));
    const double cs = critical_speed(fixture);
    CHECK(close(cs, 1.2909944487358056, 1e-14));
    CHECK(close(density_from_speed(fixture, cs), 3.5860956909327935, 1e-13));
    CHECK(density_from_speed(fixture, max_speed(fixture)) == 0.0);

    CHECK_THROWS_AS(density_from_speed(fixture, -0.1), std::domain_error);
    CHECK_THROWS_AS(density_from_speed(fixture, max_speed(fixture) + 1e-6),
                    std::domain_error);
}

TEST_CASE("pressure and sound speed") {
    CHECK(close(pressure(fixture, 1.0), 1.0 / 1.4, 1e-15));
    CHECK(pressure(fixture, 0.0) == 0.0);
    CHECK(close(pressure(GasModel(2.0, 2.5), 3.0), 4.5, 1e-15));
    CHECK(close(sound_speed(fixture, 1.0), 1.0, 1e-15));
    CHECK(close(sound_speed(GasModel(3.0, 0.5), 4.0), 4.0, 1e-14));
    // sonic state: c(rho(c*)) == c*
    const double cs = critical_speed(fixture);
    CHECK(close(sound_speed(fixture, density_from_speed(fixture, cs)), cs, 1e-14));
    CHECK_THROWS_AS(pressure(fixture, -1.0), std::domain_error);
    CHECK_THROWS_AS(sound_speed(fixture, -1.0), std::domain_error);
}

TEST_CASE("critical and maximal speeds") {
    CHECK(close(max_speed(fixture), 3.1622776601683795, 1e-14));
    // degenerate limit b0 -> -1/(gamma-1): c* -> 0
    const GasModel nearly(1.4, -2.4999999);
    CHECK(critical_speed(nearly) < 1e-3);
    for (double gamma : {1.2, 1.4, 1.67, 2.0, 3.0})
        for (double b0 : {0.5, 1.0, 2.5, 10.0}) {
            const GasModel m(gamma, b0);
            CHECK(critical_speed(m) < max_speed(m));
            CHECK(density_from_speed(m, max_speed(m)) == 0.0);
        }
}

TEST_CASE("mass flux density: endpoints and peak value") {
    CHECK(mass_flux_density(fixture, 0.0) == 0.0);
    CHECK(mass_flux_density(fixture, max_speed(fixture)) == 0.0);
    const double cs = critical_speed(fixture);
    // (5/3)^2.5 * sqrt(5/3) = (5/3)^3 = 125/27
    CHECK(close(mass_flux_density(fixture, cs), 4.6296296296296298, 1e-13));
    // peak is the global max on a 1e4-point scan
    const double fmax = mass_flux_density(fixture, cs);
    const double vmax = max_speed(fixture);
    for (int i = 0; i <= 10000; ++i) {
        const double v = vmax * i / 10000.0;
        CHECK(mass_flux_density(fixture, v) <= fmax * (1.0 + 1e-12));
    }
}

TEST_CASE("Bernoulli identity holds to 1e-12 across the speed range") {
    for (double gamma : {1.2, 1.4, 1.67, 2.0, 3.0}) {
        const GasModel m(gamma, 2.5);
        const double vmax = max_speed(m);
        for (int i = 0; i < 10000; ++i) {
            const double v = vmax * i / 10000.0;
            const double rho = density_from_speed(m, v);
            const double bern = 0.5 * v * v +
                                (std::pow(rho, gamma - 1.0) - 1.0) / (gamma - 1.0);
            CHECK(close(bern, m.b0, 1e-12 * std::max(1.0, std::fabs(m.b0))));
        }
    }
}

TEST_CASE("flux is strictly unimodal with the peak at c*") {
    for (double gamma : {1.2, 1.4, 2.0}) {
        const GasModel m(gamma, 2.5);
        const double cs = critical_speed(m);
        const double vmax = max_speed(m);
        const int n = 10000;
        int sign_changes = 0;
        double prev = mass_flux_density(m, 0.0);
        bool rising = true;
        for (int i = 1; i <= n; ++i) {
            const double v = vmax * i / n;
            const double cur = mass_flux_density(m, v);
            if (rising && cur < prev) {
                ++sign_changes;
                rising = false;
                // the turning point must straddle c*
                CHECK(std::fabs(v - cs) <= 2.0 * vmax / n);
            }
            if (!rising) CHECK(cur <= prev * (1.0 + 1e-12));
            prev = cur;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("analytic flux derivative matches finite differences") {
    const double vmax = max_speed(fixture);
    for (int i = 1; i < 100; ++i) {
        const double v = vmax * i / 100.5;
        const double h = 1e-6;
        if (v + h >= vmax) break;
        const double fd = (mass_flux_density(fixture, v + h) -
                           mass_flux_density(fixture, v - h)) / (2.0 * h);
        CHECK(close(mass_flux_density_deriv(fixture, v), fd, 1e-6));
    }
}

TEST_CASE("sonic characterization: v < c* iff v < c(rho(v^2))") {
    const double cs = critical_speed(fixture);
    const double vmax = max_speed(fixture);
    for (int i = 0; i < 100; ++i) {
        const double below = cs * (i + 0.5) / 100.0;
        const double above = cs + (vmax - cs) * (i + 0.5) / 101.0;
        CHECK(below < sound_speed(fixture, density_from_speed(fixture, below)));
        CHECK(above > sound_speed(fixture, density_from_speed(fixture, above)));
    }
}

TEST_CASE("monotone pressure-density-speed chain") {
    const double vmax = max_speed(fixture);
    double prev_rho = density_from_speed(fixture, 0.0);
    double prev_p = pressure(fixture, prev_rho);
    for (int i = 1; i <= 200; ++i) {
        const double v = vmax * i / 200.0;
        const double rho = density_from_speed(fixture, v);
        const double p = pressure(fixture, rho);
        CHECK(rho < prev_rho);
        CHECK(p < prev_p);
        prev_rho = rho;
        prev_p = p;
    }
}
