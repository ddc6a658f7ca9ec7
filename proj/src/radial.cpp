#include "transonic/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "transonic/root_finding.hpp"

namespace transonic {

namespace {

// Near-sonic guard: branch brackets stop this fraction of c* away from the
// sonic point, where the flux derivative vanishes.
constexpr double kSonicGuard = 1e-9;

double pow_int(double x, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

// Cumulative integral of nodal samples on a uniform grid.  Each interval is
// integrated with the cubic through the four nearest nodes, which keeps phi
// fourth-order accurate at every node (same order as composite Simpson).
std::vector<double> cumulative_integral(const std::vector<double>& y, double h,
                                        double start) {
    const std::size_t n = y.size();
    std::vector<double> out(n, start);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = start + 0.5 * h * (y[0] + y[1]);
        return out;
    }
    if (n == 3) {
        out[1] = start + h * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0;
        out[2] = out[1] + h * (-y[0] + 8.0 * y[1] + 5.0 * y[2]) / 12.0;
        return out;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double seg;
        if (i == 0) {
            seg = (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) / 24.0;
        } else if (i + 2 == n) {
            seg = (y[n - 4] - 5.0 * y[n - 3] + 19.0 * y[n - 2] + 9.0 * y[n - 1]) / 24.0;
        } else {
            seg = (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2]) / 24.0;
        }
        out[i + 1] = out[i] + h * seg;
    }
    return out;
}

RadialProfile branch_profile(const GasModel& gas, double a0, int dim, Branch branch,
                             double lo, double hi, std::size_t n, double phi_start) {
    if (n < 2) throw std::invalid_argument("profile grid needs at least 2 nodes");
    RadialProfile prof{gas, dim, a0, branch, {}, {}, {}, {}};
    prof.r.resize(n);
    prof.v.resize(n);
    prof.rho.resize(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i + 1 == n) ? hi : lo + h * static_cast<double>(i);
        prof.r[i] = r;
        prof.v[i] = branch_speed_for(gas, a0, dim, r, branch);
        prof.rho[i] = density_from_speed(gas, prof.v[i]);
    }
    prof.phi = cumulative_integral(prof.v, h, phi_start);
    return prof;
}

}  // namespace

OutOfIntervalError::OutOfIntervalError(double v1_, const AdmissibleInterval& i)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "exit speed " << v1_ << " lies outside the admissible interval ("
             << i.v_lo << ", " << i.v_hi << ")";
          return os.str();
      }()),
      v1(v1_),
      interval(i) {}

RadialProblem make_radial_problem(const GasModel& gas, const NozzleGeometry& geom,
                                  double u0) {
    if (!(geom.r0 > 0.0 && geom.r0 < geom.r1))
        throw std::invalid_argument("NozzleGeometry: need 0 < r0 < r1");
    if (geom.dim != 2 && geom.dim != 3)
        throw std::invalid_argument("NozzleGeometry: dim must be 2 or 3");
    if (geom.dim == 2 &&
        !(geom.half_angle > 0.0 && geom.half_angle < 1.5707963267948966))
        throw std::invalid_argument("NozzleGeometry: half_angle must lie in (0, pi/2)");
    const double cs = critical_speed(gas);
    const double vmax = max_speed(gas);
    if (!(u0 > cs && u0 < vmax)) {
        std::ostringstream os;
        os << "entry speed " << u0 << " must be strictly supersonic, in (" << cs << ", "
           << vmax << ")";
        throw std::domain_error(os.str());
    }
    const double rho0 = density_from_speed(gas, u0);
    const double a0 = pow_int(geom.r0, geom.dim - 1) * rho0 * u0;
    return RadialProblem{gas, geom, u0, rho0, a0};
}

double branch_speed_for(const GasModel& gas, double a0, int dim, double r,
                        Branch branch) {
    if (!(r > 0.0)) throw std::domain_error("branch_speed: radius must be positive");
    const double x = a0 / pow_int(r, dim - 1);
    const double cs = critical_speed(gas);
    const double fmax = mass_flux_density(gas, cs);
    if (x > fmax * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "branch_speed: no solution, required flux density " << x
           << " exceeds the sonic bound " << fmax << " (a0 = " << a0 << ", r = " << r
           << ")";
        throw std::domain_error(os.str());
    }
    if (x >= fmax * (1.0 - 1e-12)) return cs;  // branches coincide at the sonic flux

    double lo, hi;
    if (branch == Branch::supersonic) {
        lo = cs * (1.0 + kSonicGuard);
        hi = max_speed(gas);
    } else {
        lo = 0.0;
        hi = cs * (1.0 - kSonicGuard);
    }
    auto f = [&](double v) { return mass_flux_density(gas, v) - x; };
    auto df = [&](double v) { return mass_flux_density_deriv(gas, v); };
    return newton_bisect(f, df, lo, hi, 1e-13 * x);
}

double branch_speed(const RadialProblem& problem, double r, Branch branch) {
    return branch_speed_for(problem.gas, problem.a0, problem.geom.dim, r, branch);
}

ConjugateState conjugate_shock_state(double gamma, double rho, double v, Branch side) {
    if (!(rho > 0.0 && v > 0.0))
        throw std::domain_error("conjugate_shock_state: state must have rho, v > 0");
    const double m = rho * v;
    const double momentum = std::pow(rho, gamma) / gamma + m * v;
    // W(rho) = p(rho) + m^2/rho - momentum has its minimum at the sonic
    // density rho_s = m^(2/(gamma+1)) and exactly one root on each side.
    const double rho_sonic = std::pow(m, 2.0 / (gamma + 1.0));
    auto w = [&](double q) { return std::pow(q, gamma) / gamma + m * m / q - momentum; };
    auto dw = [&](double q) { return std::pow(q, gamma - 1.0) - m * m / (q * q); };

    if (std::fabs(w(rho_sonic)) <= 1e-14 * momentum)
        return {rho_sonic, m / rho_sonic};  // sonic state is its own conjugate

    double lo, hi;
    if (side == Branch::subsonic) {
        lo = rho_sonic;
        hi = std::max(2.0 * rho, 2.0 * rho_sonic);
        int grow = 0;
        while (w(hi) < 0.0 && grow++ < 200) hi *= 2.0;
    } else {
        hi = rho_sonic;
        lo = std::min(0.5 * rho, 0.5 * rho_sonic);
        int grow = 0;
        while (w(lo) < 0.0 && grow++ < 200) lo *= 0.5;
    }
    const double root = newton_bisect(w, dw, lo, hi, 1e-14 * momentum);
    return {root, m / root};
}

ShockJump rh_jump(const GasModel& gas, double v_minus) {
    const double cs = critical_speed(gas);
    const double vmax = max_speed(gas);
    if (!(v_minus > cs && v_minus < vmax)) {
        std::ostringstream os;
        os << "rh_jump: upstream speed " << v_minus
           << " must be strictly supersonic, in (" << cs << ", " << vmax << ")";
        throw std::domain_error(os.str());
    }
    const double rho_minus = density_from_speed(gas, v_minus);
    const ConjugateState post = conjugate_shock_state(gas.gamma, rho_minus, v_minus,
                                                      Branch::subsonic);
    const double b1 = 0.5 * post.v * post.v +
                      (std::pow(post.rho, gas.gamma - 1.0) - 1.0) / (gas.gamma - 1.0);
    ShockJump jump{v_minus,
                   rho_minus,
                   pressure(gas, rho_minus),
                   post.v,
                   post.rho,
                   pressure(gas, post.rho),
                   GasModel(gas.gamma, b1)};
    if (!(jump.v_plus < jump.v_minus) || !(jump.p_plus > jump.p_minus))
        throw std::runtime_error("rh_jump: entropy condition violated");
    return jump;
}

RadialProfile supersonic_profile(const RadialProblem& problem, std::size_t n) {
    return branch_profile(problem.gas, problem.a0, problem.geom.dim,
                          Branch::supersonic, problem.geom.r0, problem.geom.r1, n,
                          problem.u0 * problem.geom.r0);
}

RadialProfile supersonic_profile_range(const RadialProblem& problem, double lo,
                                       double hi, std::size_t n, double phi_start) {
    return branch_profile(problem.gas, problem.a0, problem.geom.dim,
                          Branch::supersonic, lo, hi, n, phi_start);
}

RadialProfile subsonic_profile_from_shock(const RadialProblem& problem, double r_s,
                                          std::size_t n) {
    const auto& g = problem.geom;
    if (!(r_s > g.r0 && r_s < g.r1))
        throw std::domain_error("subsonic_profile_from_shock: r_s must lie in (r0, r1)");
    const ShockJump jump = rh_jump(problem.gas, branch_speed(problem, r_s,
                                                             Branch::supersonic));
    const RadialProfile up = branch_profile(problem.gas, problem.a0, g.dim,
                                            Branch::supersonic, g.r0, r_s, n,
                                            problem.u0 * g.r0);
    return branch_profile(jump.post, problem.a0, g.dim, Branch::subsonic, r_s, g.r1, n,
                          up.phi.back());
}

double exit_velocity(const RadialProblem& problem, double r_s) {
    const auto& g = problem.geom;
    if (!(r_s > g.r0 && r_s < g.r1))
        throw std::domain_error("exit_velocity: r_s must lie in (r0, r1)");
    const ShockJump jump = rh_jump(problem.gas, branch_speed(problem, r_s,
                                                             Branch::supersonic));
    return branch_speed_for(jump.post, problem.a0, g.dim, g.r1, Branch::subsonic);
}

AdmissibleInterval admissible_interval(const RadialProblem& problem, double tol) {
    const auto& g = problem.geom;
    const double span = g.r1 - g.r0;
    const double eps = std::max(tol, 1e-12) * span;
    // one Richardson halving toward each open endpoint
    const double lo_full = exit_velocity(problem, g.r0 + eps);
    const double lo_half = exit_velocity(problem, g.r0 + 0.5 * eps);
    const double hi_full = exit_velocity(problem, g.r1 - eps);
    const double hi_half = exit_velocity(problem, g.r1 - 0.5 * eps);
    AdmissibleInterval interval{2.0 * lo_half - lo_full, 2.0 * hi_half - hi_full};
    if (!(interval.v_lo < interval.v_hi))
        throw std::runtime_error("admissible_interval: endpoint limits are not ordered");
    return interval;
}

TransonicShockSolution solve_at_shock(const RadialProblem& problem, double r_s,
                                      std::size_t n) {
    const auto& g = problem.geom;
    if (!(r_s > g.r0 && r_s < g.r1))
        throw std::domain_error("solve_at_shock: r_s must lie in (r0, r1)");
    const ShockJump jump = rh_jump(problem.gas, branch_speed(problem, r_s,
                                                             Branch::supersonic));
    RadialProfile up = branch_profile(problem.gas, problem.a0, g.dim,
                                      Branch::supersonic, g.r0, r_s, n,
                                      problem.u0 * g.r0);
    RadialProfile down = branch_profile(jump.post, problem.a0, g.dim, Branch::subsonic,
                                        r_s, g.r1, n, up.phi.back());
    const double v1 = down.v.back();
    return TransonicShockSolution{problem, r_s, jump, std::move(up), std::move(down), v1};
}

TransonicShockSolution find_shock(const RadialProblem& problem, double v1, double tol,
                                  std::size_t n) {
    const auto& g = problem.geom;
    const double span = g.r1 - g.r0;
    const double delta = 1e-12 * span;
    const double lo = g.r0 + delta;
    const double hi = g.r1 - delta;
    const double v_at_lo = exit_velocity(problem, lo);
    const double v_at_hi = exit_velocity(problem, hi);
    if (!(v1 > v_at_lo && v1 < v_at_hi))
        throw OutOfIntervalError(v1, admissible_interval(problem, 1e-9));

    auto f = [&](double r) { return exit_velocity(problem, r) - v1; };
    const double r_s = secant_bisect(f, lo, hi, std::max(tol, 0.0), 1e-13 * span);
    TransonicShockSolution sol = solve_at_shock(problem, r_s, n);
    if (std::fabs(sol.v1 - v1) > std::max(tol, 1e-12 * v1) * 2.0) {
        std::ostringstream os;
        os << "find_shock: failed to converge, |exit - target| = "
           << std::fabs(sol.v1 - v1) << " with final bracket near r_s = " << r_s;
        throw ConvergenceError(os.str());
    }
    return sol;
}

Lemma1Report verify_lemma1(const RadialProblem& problem,
                           const TransonicShockSolution& sol) {
    const std::size_t n = sol.subsonic.r.size();
    const RadialProfile ext = supersonic_profile_range(problem, sol.r_s,
                                                       problem.geom.r1, n,
                                                       sol.supersonic.phi.back());
    Lemma1Report rep;
    rep.potential_ordering = {"phi- > phi_b+ on (r_s, r1]", true, 1e300, sol.r_s};
    rep.speed_ordering = {"d_r phi- > d_r phi_b+ on [r_s, r1]", true, 1e300, sol.r_s};
    for (std::size_t i = 0; i < n; ++i) {
        const double dv = ext.v[i] - sol.subsonic.v[i];
        if (dv < rep.speed_ordering.worst_margin) {
            rep.speed_ordering.worst_margin = dv;
            rep.speed_ordering.at_r = ext.r[i];
        }
        if (i == 0) continue;  // potentials coincide at the shock itself
        const double dphi = ext.phi[i] - sol.subsonic.phi[i];
        if (dphi < rep.potential_ordering.worst_margin) {
            rep.potential_ordering.worst_margin = dphi;
            rep.potential_ordering.at_r = ext.r[i];
        }
    }
    rep.potential_ordering.pass = rep.potential_ordering.worst_margin > 0.0;
    rep.speed_ordering.pass = rep.speed_ordering.worst_margin > 0.0;
    const double gap = std::fabs(ext.phi.front() - sol.subsonic.phi.front());
    rep.potential_continuity = {"phi-(r_s) == phi_b+(r_s)", gap <= 1e-12, gap, sol.r_s};
    rep.pass = rep.potential_ordering.pass && rep.speed_ordering.pass &&
               rep.potential_continuity.pass;
    return rep;
}

SolutionResiduals solution_residuals(const TransonicShockSolution& sol) {
    SolutionResiduals res{0.0, 0.0, 0.0, 0.0};
    auto scan = [&](const RadialProfile& p) {
        const double gm1 = p.gas.gamma - 1.0;
        for (std::size_t i = 0; i < p.r.size(); ++i) {
            const double flux = pow_int(p.r[i], p.dim - 1) * p.rho[i] * p.v[i];
            res.mass_max = std::max(res.mass_max, std::fabs(flux - p.a0) / p.a0);
            const double bern = 0.5 * p.v[i] * p.v[i] +
                                (std::pow(p.rho[i], gm1) - 1.0) / gm1 - p.gas.b0;
            res.bernoulli_max = std::max(res.bernoulli_max, std::fabs(bern));
        }
    };
    scan(sol.supersonic);
    scan(sol.subsonic);
    const double m_minus = sol.jump.rho_minus * sol.jump.v_minus;
    const double m_plus = sol.jump.rho_plus * sol.jump.v_plus;
    res.rh_flux = std::fabs(m_plus - m_minus) / m_minus;
    res.phi_continuity =
        std::fabs(sol.supersonic.phi.back() - sol.subsonic.phi.front());
    return res;
}

}  // namespace transonic
