// Free-boundary verification of shock uniqueness in a 2D wedge nozzle.
//
// A candidate shock front r = f(theta) bounds the subsonic region
// f(theta) < r < r1, |theta| <= theta_w.  Each outer iteration jumps the
// known radial supersonic flow across the current front (fixing the
// post-shock closure per angular column), solves the potential equation in
// the mapped rectangle s = (r - f)/(r1 - f) with the front potential
// matched to the supersonic side, the prescribed exit speed, and slip
// walls, and then moves the front by the Rankine-Hugoniot mass-flux
// residual.  The unique fixed point is the symmetric transonic shock; the
// iteration demonstrates collapse of perturbed fronts onto it.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "transonic/radial.hpp"

namespace transonic {

// Sampled free boundary r = f(theta) on a uniform grid over [-theta_w, theta_w].
struct ShockFront {
    double theta_w;
    std::vector<double> theta;
    std::vector<double> f;
    int iteration = 0;
};

// Solver knobs.  Tolerances are absolute: front_tol in radius units,
// picard_tol in potential units, linear_tol relative to the initial linear
// residual.  omega under-relaxes the front update; delta_clamp is the
// fraction of c* held back when densities are frozen.
struct FbpConfig {
    std::size_t nr = 64;
    std::size_t ntheta = 32;
    double picard_tol = 1e-10;
    double linear_tol = 1e-10;
    double front_tol = 1e-5;
    double omega = 0.8;
    double delta_clamp = 0.05;
    std::size_t max_outer = 300;
    std::size_t max_picard = 120;
};

// Upstream data on the front: R-H flux datum g = a0 / f^(dim-1), the
// supersonic potential trace, and the supersonic speed at the front.
struct BoundaryTrace {
    std::vector<double> g;
    std::vector<double> phi_minus;
    std::vector<double> v_minus;
};

// Discrete potential on the mapped rectangle, nodes (s_i, theta_j),
// i = 0..nr (s=0 is the front), j = 0..ntheta.  Derived velocity fields are
// physical components; gas_col is the per-column post-shock closure.
struct Field2D {
    std::size_t nr = 0;
    std::size_t ntheta = 0;
    double r1 = 0.0;
    double v1 = 0.0;
    double a0 = 0.0;
    int dim = 2;
    std::vector<double> s;
    std::vector<double> theta;
    std::vector<double> f;
    std::vector<GasModel> gas_col;
    std::vector<double> phi;      // (nr+1) * (ntheta+1), row-major in i
    std::vector<double> v_r;
    std::vector<double> v_theta;
    std::vector<double> speed;
    std::vector<double> rho;
    std::size_t picard_iterations = 0;
    double linear_residual = 0.0;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * (ntheta + 1) + j; }
};

enum class Verdict { converged, max_iterations, diverged };

struct UniquenessMetrics {
    double front_dev_cells = 0.0;    // max |f - r_s| in units of (r1-r0)/nr
    double speed_linf_rel = 0.0;
    double speed_l2_rel = 0.0;
    double dirichlet_mismatch = 0.0;
};

struct WallAngles {
    double lo;  // one-sided f'(-theta_w)
    double hi;  // one-sided f'(+theta_w)
};

struct ConvergenceReport {
    std::size_t outer_iterations = 0;
    std::vector<double> front_deviation_history;  // max |f - r_s_ref|
    std::vector<double> rh_residual_history;      // max |flux residual| on S
    std::vector<double> front_move_history;       // max |f_new - f|
    double final_field_residual = 0.0;
    WallAngles perpendicularity{0.0, 0.0};
    bool perpendicularity_pass = false;
    bool clipped = false;
    Verdict verdict = Verdict::max_iterations;
    UniquenessMetrics metrics;
    double r_s_ref = 0.0;
    std::string diagnostics;
};

struct FbpResult {
    ShockFront front;
    Field2D field;
    ConvergenceReport report;
};

// Initial fronts around a base radius.  mode >= 1 gives
// f = r_s + amplitude * cos(mode * pi * theta / theta_w); mode == 0 gives
// seeded smooth noise (cosine modes 1..4 with mt19937 coefficients) scaled
// to max deviation == amplitude.  Both families are wall-orthogonal.
ShockFront perturb_front(const RadialProblem& problem, double r_s, double amplitude,
                         int mode, unsigned seed, std::size_t ntheta);

// R-H flux datum and supersonic traces along the current front.
BoundaryTrace supersonic_trace(const RadialProblem& problem, const ShockFront& front);

// Picard / SSOR solve of the subsonic potential behind a fixed front.
// Throws ConvergenceError when the Picard or linear iteration caps are hit.
Field2D solve_subsonic(const RadialProblem& problem, const ShockFront& front,
                       const FbpConfig& config, double v1,
                       const Field2D* initial_guess = nullptr);

// One front correction from the R-H mass-flux residual; spectrally
// preconditioned in the angular cosine basis and clipped to
// [r0 + h_r, r1 - h_r].  Sets *clipped when the clip engages.
ShockFront front_update(const ShockFront& front, const Field2D& field,
                        const BoundaryTrace& trace, const RadialProblem& problem,
                        double omega, bool* clipped = nullptr);

// Deviation of a converged state from the symmetric reference solution.
UniquenessMetrics check_uniqueness(const ShockFront& front, const Field2D& field,
                                   const TransonicShockSolution& reference);

// One-sided wall slope estimates of the front.
WallAngles check_perpendicularity(const ShockFront& front);

// Full outer iteration.  Requires dim == 2 and v1 strictly inside the
// admissible interval (checked before any solve).
FbpResult run_fbp(const RadialProblem& problem, double v1, const ShockFront& initial,
                  const FbpConfig& config);

}  // namespace transonic
