// Symmetric transonic shock solutions in straight divergent nozzles.
//
// The radial flow solves the algebraic system
//     r^(dim-1) * rho * v = a0,    v^2/2 + (rho^(gamma-1) - 1)/(gamma-1) = b
// on the supersonic branch ahead of the shock (b = entry Bernoulli constant)
// and on the subsonic branch behind it.  Across the shock, mass flux and
// momentum flux are conserved while the Bernoulli constant drops; the
// post-shock constant parameterizes the downstream branch so the exit speed
// is a strictly increasing function of the shock radius.  Fitting a shock to
// a prescribed exit speed inverts that map.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "transonic/gas.hpp"

namespace transonic {

enum class Branch { supersonic, subsonic };

// Straight divergent nozzle between radii r0 < r1.  dim selects the flux law
// r^(dim-1) rho v = a0 (dim=3: spherical wedge, dim=2: plane wedge).
// half_angle is the wall half-opening angle, used by the 2D free-boundary
// solver only; it must lie in (0, pi/2) when dim == 2.
struct NozzleGeometry {
    double r0;
    double r1;
    int dim;
    double half_angle;
};

// Entry data plus the derived mass-flux constant a0 = r0^(dim-1) rho0 u0.
struct RadialProblem {
    GasModel gas;
    NozzleGeometry geom;
    double u0;
    double rho0;
    double a0;
};

// Validates geometry and the supersonic entry range c* < u0 < max_speed.
RadialProblem make_radial_problem(const GasModel& gas, const NozzleGeometry& geom,
                                  double u0);

// Sampled radial flow on one branch.  gas is the closure the profile lives
// on (the post-shock model for subsonic profiles), so Bernoulli holds with
// the profile's own constant at every node.
struct RadialProfile {
    GasModel gas;
    int dim;
    double a0;
    Branch branch;
    std::vector<double> r;
    std::vector<double> v;
    std::vector<double> rho;
    std::vector<double> phi;
};

// Shock jump state: mass flux m = rho v and momentum flux p + rho v^2 are
// equal on the two sides; post carries the dissipated Bernoulli constant.
struct ShockJump {
    double v_minus;
    double rho_minus;
    double p_minus;
    double v_plus;
    double rho_plus;
    double p_plus;
    GasModel post;
};

struct TransonicShockSolution {
    RadialProblem problem;
    double r_s;
    ShockJump jump;
    RadialProfile supersonic;  // on [r0, r_s]
    RadialProfile subsonic;    // on [r_s, r1]
    double v1;                 // exit speed, subsonic.v.back()
};

// Open interval of exit speeds attainable by interior shock positions.
struct AdmissibleInterval {
    double v_lo;
    double v_hi;
};

// Prescribed exit speed outside the admissible interval.
class OutOfIntervalError : public std::runtime_error {
  public:
    OutOfIntervalError(double v1, const AdmissibleInterval& interval);
    double v1;
    AdmissibleInterval interval;
};

// Iteration cap reached without meeting a tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Unique speed on the requested branch with r^(dim-1) rho(v^2) v = a0.
// Residual |flux - a0| <= 1e-13 a0.  Throws std::domain_error when a0
// exceeds the sonic flux bound r^(dim-1) * mass_flux_density(c*).
double branch_speed(const RadialProblem& problem, double r, Branch branch);

// Branch solve against an arbitrary closure (used for post-shock profiles).
double branch_speed_for(const GasModel& gas, double a0, int dim, double r,
                        Branch branch);

// The state with equal mass and momentum flux on the other side of the
// sonic point.  Returns {rho, v}.
struct ConjugateState {
    double rho;
    double v;
};
ConjugateState conjugate_shock_state(double gamma, double rho, double v, Branch side);

// Rankine-Hugoniot jump from a strictly supersonic speed on the model's
// branch: conserves rho v and p + rho v^2, selects the subsonic root, and
// reports the post-shock Bernoulli constant.  Entropy condition v+ < v- and
// the pressure rise p+ > p- hold for every admissible input.
ShockJump rh_jump(const GasModel& gas, double v_minus);

// Supersonic flow through the whole nozzle on an n-point uniform grid,
// with phi integrated from phi(r0) = u0 r0.
RadialProfile supersonic_profile(const RadialProblem& problem, std::size_t n);

// Same branch construction on an arbitrary subrange with a given phi start.
RadialProfile supersonic_profile_range(const RadialProblem& problem, double lo,
                                       double hi, std::size_t n, double phi_start);

// Post-shock subsonic flow on [r_s, r1]: jump at r_s, then the subsonic
// branch of the post-shock closure with the same a0, phi continued from the
// supersonic potential at r_s.
RadialProfile subsonic_profile_from_shock(const RadialProblem& problem, double r_s,
                                          std::size_t n);

// Exit speed of the transonic solution with shock at r_s; strictly
// increasing in r_s.
double exit_velocity(const RadialProblem& problem, double r_s);

// Endpoint limits of the exit-speed map, via offset evaluation at
// eps = tol (r1 - r0) plus one Richardson halving.  Open interval.
AdmissibleInterval admissible_interval(const RadialProblem& problem, double tol);

// Full solution with the shock placed so the exit speed matches v1 to tol.
// Throws OutOfIntervalError when v1 is not strictly inside the interval.
TransonicShockSolution find_shock(const RadialProblem& problem, double v1,
                                  double tol, std::size_t n = 257);

// Assembled solution for a prescribed shock radius.
TransonicShockSolution solve_at_shock(const RadialProblem& problem, double r_s,
                                      std::size_t n = 257);

// Node-by-node check of the ordering properties of the shock family:
// the supersonic flow extended past the shock stays above the subsonic flow
// in both potential and speed.
struct Lemma1Property {
    std::string name;
    bool pass;
    double worst_margin;
    double at_r;
};
struct Lemma1Report {
    Lemma1Property potential_ordering;   // phi- > phi_b+ on (r_s, r1]
    Lemma1Property speed_ordering;       // v-  > v_b+  on [r_s, r1]
    Lemma1Property potential_continuity; // phi-(r_s) == phi_b+(r_s)
    bool pass;
};
Lemma1Report verify_lemma1(const RadialProblem& problem,
                           const TransonicShockSolution& solution);

// Largest invariant residuals of an assembled solution (mass flux, Bernoulli,
// jump flux match, potential continuity); used for reporting.
struct SolutionResiduals {
    double mass_max;
    double bernoulli_max;
    double rh_flux;
    double phi_continuity;
};
SolutionResiduals solution_residuals(const TransonicShockSolution& solution);

}  // namespace transonic
