// Bracketed scalar root finding: bisection safeguarded by Newton steps.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace transonic {

// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs and f is
// monotone on the bracket.  Newton steps (using df) are taken whenever they
// stay inside the current bracket; otherwise the step falls back to
// bisection, so convergence is unconditional.  Stops once |f| <= ftol or the
// bracket has collapsed to a few ulps, and returns the point with the
// smallest |f| seen.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double ftol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("newton_bisect: root not bracketed");

    double best_x = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
    double best_f = std::fabs(flo) < std::fabs(fhi) ? std::fabs(flo) : std::fabs(fhi);

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double fx = f(x);
        if (std::fabs(fx) < best_f) {
            best_f = std::fabs(fx);
            best_x = x;
        }
        if (std::fabs(fx) <= ftol) return x;

        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::fabs(lo) + std::fabs(hi) + 1e-300))
            break;

        const double d = df(x);
        double xn = x - fx / d;
        if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
        if (xn == x) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return best_x;
}

// Derivative-free variant: secant steps safeguarded by bisection.
template <class F>
double secant_bisect(F&& f, double lo, double hi, double ftol, double xtol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("secant_bisect: root not bracketed");

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double fx = f(x);
        if (std::fabs(fx) <= ftol) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= xtol) break;
        double xn = (lo * fhi - hi * flo) / (fhi - flo);  // secant through bracket
        if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        // keep secant honest: never let the bracket stagnate
        if (std::fabs(xn - mid) > 0.45 * (hi - lo)) xn = mid;
        x = xn;
    }
    return 0.5 * (lo + hi);
}

}  // namespace transonic
