// Independent oracles for the radial shock family: closed-form gas closure
// plus plain 200-iteration bisection solves.  Deliberately self-contained so
// the regression targets do not depend on the library code paths they check.
#pragma once

#include <cmath>
#include <stdexcept>

namespace oracle {

struct Gas {
    double gamma;
    double b0;
};

inline double density(const Gas& g, double v) {
    const double k = 1.0 + (g.gamma - 1.0) * (g.b0 - 0.5 * v * v);
    return k <= 0.0 ? 0.0 : std::pow(k, 1.0 / (g.gamma - 1.0));
}

inline double flux(const Gas& g, double v) { return density(g, v) * v; }

inline double crit_speed(const Gas& g) {
    return std::sqrt(2.0 * (1.0 + (g.gamma - 1.0) * g.b0) / (g.gamma + 1.0));
}

inline double vac_speed(const Gas& g) {
    return std::sqrt(2.0 * (g.b0 + 1.0 / (g.gamma - 1.0)));
}

inline double pressure(const Gas& g, double rho) {
    return std::pow(rho, g.gamma) / g.gamma;
}

// Bisection for flux(v) = x on the requested branch, 200 iterations.
inline double branch_speed(const Gas& g, double x, bool supersonic) {
    double lo = supersonic ? crit_speed(g) : 0.0;
    double hi = supersonic ? vac_speed(g) : crit_speed(g);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool above = flux(g, mid) > x;
        if (above == supersonic)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Mass+momentum shock jump: bisection on W(rho) = p + m^2/rho - momentum
// over the subsonic side [rho_sonic, rho_big].  Returns post speed; the
// post Bernoulli constant comes out via post_bernoulli below.
inline double jump_density(const Gas& g, double rho_minus, double v_minus) {
    const double m = rho_minus * v_minus;
    const double mom = pressure(g, rho_minus) + m * v_minus;
    double lo = std::pow(m, 2.0 / (g.gamma + 1.0));
    double hi = lo;
    auto w = [&](double q) { return pressure(g, q) + m * m / q - mom; };
    while (w(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (w(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double bernoulli_of(const Gas& g, double rho, double v) {
    return 0.5 * v * v + (std::pow(rho, g.gamma - 1.0) - 1.0) / (g.gamma - 1.0);
}

// Exit speed of the shock family member with shock at r_s:
// supersonic bisection at r_s, momentum jump, subsonic bisection at r1 with
// the dissipated Bernoulli constant.
inline double exit_speed(const Gas& g, double r0, double r1, int dim, double u0,
                         double r_s) {
    const double a0 = std::pow(r0, dim - 1) * flux(g, u0);
    const double vm = branch_speed(g, a0 / std::pow(r_s, dim - 1), true);
    const double rm = density(g, vm);
    const double rp = jump_density(g, rm, vm);
    const double vp = rm * vm / rp;
    const Gas post{g.gamma, bernoulli_of(g, rp, vp)};
    return branch_speed(post, a0 / std::pow(r1, dim - 1), false);
}

// Shock radius matching a prescribed exit speed, bisection on the monotone
// exit map.
inline double shock_radius(const Gas& g, double r0, double r1, int dim, double u0,
                           double v1) {
    double lo = r0 + 1e-13 * (r1 - r0);
    double hi = r1 - 1e-13 * (r1 - r0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (exit_speed(g, r0, r1, dim, u0, mid) < v1)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
