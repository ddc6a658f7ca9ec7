#include "transonic/fbp2d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace transonic {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pow_int(double x, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

// Fine supersonic profile with cubic Hermite evaluation of the potential
// (phi' = v is exact at the nodes, so the interpolant is O(h^4)).
struct SupersonicSpline {
    double r0;
    double h;
    std::vector<double> r;
    std::vector<double> v;
    std::vector<double> phi;
};

SupersonicSpline build_supersonic_spline(const RadialProblem& p, std::size_t n) {
    RadialProfile prof = supersonic_profile(p, n);
    SupersonicSpline sp;
    sp.r0 = p.geom.r0;
    sp.h = (p.geom.r1 - p.geom.r0) / static_cast<double>(n - 1);
    sp.r = std::move(prof.r);
    sp.v = std::move(prof.v);
    sp.phi = std::move(prof.phi);
    return sp;
}

double spline_phi(const SupersonicSpline& sp, double x) {
    const std::size_t n = sp.r.size();
    const double t = (x - sp.r0) / sp.h;
    std::size_t k = 0;
    if (t > 0.0) k = std::min(static_cast<std::size_t>(t), n - 2);
    const double u = (x - sp.r[k]) / sp.h;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return h00 * sp.phi[k] + sp.h * h10 * sp.v[k] + h01 * sp.phi[k + 1] +
           sp.h * h11 * sp.v[k + 1];
}

// DCT-I pair on N+1 nodes (cosine modes with zero slope at both walls).
void dct1(const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = x.size() - 1;
    out.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        double acc = 0.5 * x[0] + 0.5 * x[n] * ((k % 2 == 0) ? 1.0 : -1.0);
        for (std::size_t j = 1; j < n; ++j)
            acc += x[j] * std::cos(kPi * static_cast<double>(k * j) / n);
        out[k] = 2.0 * acc / static_cast<double>(n);
    }
}

void idct1(const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = x.size() - 1;
    out.assign(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        double acc = 0.5 * x[0] + 0.5 * x[n] * ((j % 2 == 0) ? 1.0 : -1.0);
        for (std::size_t k = 1; k < n; ++k)
            acc += x[k] * std::cos(kPi * static_cast<double>(k * j) / n);
        out[j] = acc;
    }
}

std::vector<double> front_slopes(const ShockFront& front) {
    const std::size_t n = front.f.size();
    const double h = front.theta[1] - front.theta[0];
    std::vector<double> fp(n);
    fp[0] = (-3.0 * front.f[0] + 4.0 * front.f[1] - front.f[2]) / (2.0 * h);
    fp[n - 1] = (3.0 * front.f[n - 1] - 4.0 * front.f[n - 2] + front.f[n - 3]) /
                (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j)
        fp[j] = (front.f[j + 1] - front.f[j - 1]) / (2.0 * h);
    return fp;
}

void validate_front(const RadialProblem& problem, const ShockFront& front) {
    if (problem.geom.dim != 2)
        throw std::invalid_argument("fbp2d: problem must have dim == 2");
    if (front.f.size() < 5 || front.f.size() != front.theta.size())
        throw std::invalid_argument("fbp2d: malformed front");
    for (double f : front.f)
        if (!(f > problem.geom.r0 && f < problem.geom.r1))
            throw std::domain_error("fbp2d: front leaves the nozzle interior");
}

// Picard / SSOR discretization of div(rho grad phi) = 0 on the mapped
// rectangle s = (r - f)/(r1 - f), theta in [-theta_w, theta_w].
// In mapped coordinates the conservative form is
//   d_s G1 + d_theta G2 = 0,
//   G1 = rho [ alpha phi_s - beta phi_theta ],   alpha = (r^2 + f'^2 (1-s)^2)/(r L)
//   G2 = rho [ (L/r) phi_theta - beta phi_s ],   beta  = f' (1-s)/r,  L = r1 - f.
// Node-centered finite volumes; cross terms enter the fluxes with centered
// averages and are lagged during the relaxation sweeps.
class SubsonicSolver {
  public:
    SubsonicSolver(const RadialProblem& problem, const ShockFront& front,
                   const FbpConfig& config, double v1, const BoundaryTrace& trace)
        : p_(problem), front_(front), cfg_(config), v1_(v1), trace_(trace) {
        ns_ = cfg_.nr;
        nt_ = cfg_.ntheta;
        if (front_.f.size() != nt_ + 1)
            throw std::invalid_argument(
                "solve_subsonic: front grid must match config.ntheta + 1 nodes");
        hs_ = 1.0 / static_cast<double>(ns_);
        ht_ = 2.0 * front_.theta_w / static_cast<double>(nt_);
        fp_ = front_slopes(front_);
        // post-shock closure per angular column
        gas_col_.reserve(nt_ + 1);
        for (std::size_t j = 0; j <= nt_; ++j)
            gas_col_.push_back(rh_jump(p_.gas, trace_.v_minus[j]).post);
    }

    Field2D solve(const Field2D* guess) {
        Field2D field = make_field();
        if (guess && guess->phi.size() == field.phi.size() &&
            guess->nr == ns_ && guess->ntheta == nt_) {
            field.phi = guess->phi;
        } else {
            initial_guess(field);
        }
        // Dirichlet row: phi continuous with the supersonic potential
        for (std::size_t j = 0; j <= nt_; ++j) field.phi[field.idx(0, j)] =
            trace_.phi_minus[j];

        std::vector<double> prev(field.phi.size());
        std::ostringstream history;
        for (std::size_t pic = 1; pic <= cfg_.max_picard; ++pic) {
            prev = field.phi;
            freeze_coefficients(field);
            const double lin_res = ssor(field);
            double delta = 0.0;
            for (std::size_t k = 0; k < prev.size(); ++k)
                delta = std::max(delta, std::fabs(field.phi[k] - prev[k]));
            history << (pic > 1 ? " " : "") << delta;
            field.picard_iterations = pic;
            field.linear_residual = lin_res;
            if (delta < cfg_.picard_tol) {
                fill_derived(field);
                return field;
            }
        }
        throw ConvergenceError(
            "solve_subsonic: Picard iteration cap hit; update history: " +
            history.str());
    }

  private:
    std::size_t nid(std::size_t i, std::size_t j) const { return i * (nt_ + 1) + j; }

    double radius(std::size_t j, double s) const {
        return front_.f[j] + s * (p_.geom.r1 - front_.f[j]);
    }

    Field2D make_field() const {
        Field2D f;
        f.nr = ns_;
        f.ntheta = nt_;
        f.r1 = p_.geom.r1;
        f.v1 = v1_;
        f.a0 = p_.a0;
        f.dim = p_.geom.dim;
        f.s.resize(ns_ + 1);
        for (std::size_t i = 0; i <= ns_; ++i)
            f.s[i] = static_cast<double>(i) * hs_;
        f.s[ns_] = 1.0;
        f.theta = front_.theta;
        f.f = front_.f;
        f.gas_col = gas_col_;
        f.phi.assign((ns_ + 1) * (nt_ + 1), 0.0);
        return f;
    }

    // Column-wise radial flow with the column's post-shock closure.
    void initial_guess(Field2D& field) const {
        for (std::size_t j = 0; j <= nt_; ++j) {
            const double L = p_.geom.r1 - front_.f[j];
            double phi = trace_.phi_minus[j];
            double v_prev = branch_speed_for(gas_col_[j], p_.a0, 2, front_.f[j],
                                             Branch::subsonic);
            field.phi[nid(0, j)] = phi;
            for (std::size_t i = 1; i <= ns_; ++i) {
                const double v_cur = branch_speed_for(gas_col_[j], p_.a0, 2,
                                                      radius(j, field.s[i]),
                                                      Branch::subsonic);
                phi += 0.5 * (v_prev + v_cur) * hs_ * L;
                field.phi[nid(i, j)] = phi;
                v_prev = v_cur;
            }
        }
    }

    // theta-derivative stencil numerator: phi_theta = td / (2 ht)
    double td(const Field2D& f, std::size_t i, std::size_t j) const {
        if (j == 0) return 2.0 * (f.phi[nid(i, 1)] - f.phi[nid(i, 0)]);
        if (j == nt_) return 2.0 * (f.phi[nid(i, nt_)] - f.phi[nid(i, nt_ - 1)]);
        return f.phi[nid(i, j + 1)] - f.phi[nid(i, j - 1)];
    }

    // s-derivative stencil numerator: phi_s = sd / (2 hs)
    double sd(const Field2D& f, std::size_t i, std::size_t j) const {
        if (i == 0) return 2.0 * (f.phi[nid(1, j)] - f.phi[nid(0, j)]);
        if (i == ns_) return 2.0 * (f.phi[nid(ns_, j)] - f.phi[nid(ns_ - 1, j)]);
        return f.phi[nid(i + 1, j)] - f.phi[nid(i - 1, j)];
    }

    void nodal_state(const Field2D& f, std::size_t i, std::size_t j, double& vr,
                     double& vth) const {
        const double L = p_.geom.r1 - front_.f[j];
        const double phis = sd(f, i, j) / (2.0 * hs_);
        const double phit = td(f, i, j) / (2.0 * ht_);
        const double r = radius(j, f.s[i]);
        vr = phis / L;
        const double dtheta = phit - fp_[j] * (1.0 - f.s[i]) / L * phis;
        vth = dtheta / r;
    }

    void freeze_coefficients(const Field2D& field) {
        const std::size_t cols = nt_ + 1;
        rho_.assign((ns_ + 1) * cols, 0.0);
        for (std::size_t i = 0; i <= ns_; ++i)
            for (std::size_t j = 0; j <= nt_; ++j) {
                double vr, vth;
                nodal_state(field, i, j, vr, vth);
                const double speed = std::hypot(vr, vth);
                const double cap = (1.0 - cfg_.delta_clamp) * critical_speed(gas_col_[j]);
                rho_[nid(i, j)] = density_from_speed(gas_col_[j], std::min(speed, cap));
            }

        // exit Neumann datum, sign fixed by outflow: d_r phi = +sqrt(v1^2 - vtheta^2)
        exit_flux_.assign(cols, 0.0);
        for (std::size_t j = 0; j <= nt_; ++j) {
            const double phit = td(field, ns_, j) / (2.0 * ht_);
            const double vth = phit / p_.geom.r1;
            const double q = std::sqrt(std::max(0.0, v1_ * v1_ - vth * vth));
            const double dth = (j == 0 || j == nt_) ? 0.5 * ht_ : ht_;
            exit_flux_[j] = dth * p_.geom.r1 * rho_[nid(ns_, j)] * q;
        }

        // s-faces (between i and i+1), premultiplied by the cell theta-width
        sA_.assign(ns_ * cols, 0.0);
        sB_.assign(ns_ * cols, 0.0);
        for (std::size_t i = 0; i < ns_; ++i)
            for (std::size_t j = 0; j <= nt_; ++j) {
                const double s_face = (static_cast<double>(i) + 0.5) * hs_;
                const double L = p_.geom.r1 - front_.f[j];
                const double r = radius(j, s_face);
                const double one_s = 1.0 - s_face;
                const double alpha = (r * r + fp_[j] * fp_[j] * one_s * one_s) / (r * L);
                const double beta = fp_[j] * one_s / r;
                const double rho_face = 0.5 * (rho_[nid(i, j)] + rho_[nid(i + 1, j)]);
                const double dth = (j == 0 || j == nt_) ? 0.5 * ht_ : ht_;
                sA_[i * cols + j] = dth * rho_face * alpha / hs_;
                sB_[i * cols + j] = dth * rho_face * beta / (4.0 * ht_);
            }

        // theta-faces (between j and j+1), premultiplied by the cell s-width
        tA_.assign((ns_ + 1) * nt_, 0.0);
        tB_.assign((ns_ + 1) * nt_, 0.0);
        for (std::size_t i = 1; i <= ns_; ++i)
            for (std::size_t j = 0; j < nt_; ++j) {
                const double ff = 0.5 * (front_.f[j] + front_.f[j + 1]);
                const double fpf = 0.5 * (fp_[j] + fp_[j + 1]);
                const double L = p_.geom.r1 - ff;
                const double s_i = (i == ns_) ? 1.0 : static_cast<double>(i) * hs_;
                const double r = ff + s_i * L;
                const double beta = fpf * (1.0 - s_i) / r;
                const double rho_face = 0.5 * (rho_[nid(i, j)] + rho_[nid(i, j + 1)]);
                const double ds = (i == ns_) ? 0.5 * hs_ : hs_;
                tA_[i * nt_ + j] = ds * rho_face * (L / r) / ht_;
                tB_[i * nt_ + j] = ds * rho_face * beta / (4.0 * hs_);
            }

        diag_.assign((ns_ + 1) * cols, 1.0);
        for (std::size_t i = 1; i <= ns_; ++i)
            for (std::size_t j = 0; j <= nt_; ++j) {
                double d = sA_[(i - 1) * cols + j];
                if (i < ns_) d += sA_[i * cols + j];
                if (j < nt_) d += tA_[i * nt_ + j];
                if (j > 0) d += tA_[i * nt_ + j - 1];
                diag_[nid(i, j)] = d;
            }
    }

    double face_g1(const Field2D& f, std::size_t i, std::size_t j) const {
        const std::size_t cols = nt_ + 1;
        return sA_[i * cols + j] * (f.phi[nid(i + 1, j)] - f.phi[nid(i, j)]) -
               sB_[i * cols + j] * (td(f, i, j) + td(f, i + 1, j));
    }

    double face_g2(const Field2D& f, std::size_t i, std::size_t j) const {
        return tA_[i * nt_ + j] * (f.phi[nid(i, j + 1)] - f.phi[nid(i, j)]) -
               tB_[i * nt_ + j] * (sd(f, i, j) + sd(f, i, j + 1));
    }

    double cell_residual(const Field2D& f, std::size_t i, std::size_t j) const {
        double up = (i == ns_) ? exit_flux_[j] : face_g1(f, i, j);
        double down = face_g1(f, i - 1, j);
        double right = (j == nt_) ? 0.0 : face_g2(f, i, j);
        double left = (j == 0) ? 0.0 : face_g2(f, i, j - 1);
        return (up - down) + (right - left);
    }

    double residual_norm(const Field2D& f) const {
        double r = 0.0;
        for (std::size_t i = 1; i <= ns_; ++i)
            for (std::size_t j = 0; j <= nt_; ++j)
                r = std::max(r, std::fabs(cell_residual(f, i, j)));
        return r;
    }

    double ssor(Field2D& f) {
        const double scale = p_.a0 * ht_;
        const double target = cfg_.linear_tol * scale;
        const double omega = 1.85;
        double res = residual_norm(f);
        std::size_t sweeps = 0;
        const std::size_t max_sweeps = 40000;
        while (res > target) {
            for (int pass = 0; pass < 2; ++pass) {
                if (pass == 0) {
                    for (std::size_t i = 1; i <= ns_; ++i)
                        for (std::size_t j = 0; j <= nt_; ++j)
                            f.phi[nid(i, j)] +=
                                omega * cell_residual(f, i, j) / diag_[nid(i, j)];
                } else {
                    for (std::size_t i = ns_; i >= 1; --i)
                        for (std::size_t j = nt_ + 1; j-- > 0;)
                            f.phi[nid(i, j)] +=
                                omega * cell_residual(f, i, j) / diag_[nid(i, j)];
                }
            }
            sweeps += 2;
            if (sweeps % 8 == 0 || sweeps >= max_sweeps) {
                res = residual_norm(f);
                if (sweeps >= max_sweeps && res > target) {
                    std::ostringstream os;
                    os << "solve_subsonic: linear solver stalled at residual " << res
                       << " (target " << target << ") after " << sweeps << " sweeps";
                    throw ConvergenceError(os.str());
                }
            }
        }
        return res;
    }

    void fill_derived(Field2D& f) const {
        const std::size_t n = f.phi.size();
        f.v_r.assign(n, 0.0);
        f.v_theta.assign(n, 0.0);
        f.speed.assign(n, 0.0);
        f.rho.assign(n, 0.0);
        for (std::size_t i = 0; i <= ns_; ++i)
            for (std::size_t j = 0; j <= nt_; ++j) {
                double vr, vth;
                nodal_state(f, i, j, vr, vth);
                const std::size_t k = nid(i, j);
                f.v_r[k] = vr;
                f.v_theta[k] = vth;
                f.speed[k] = std::hypot(vr, vth);
                const double vcap =
                    std::min(f.speed[k], max_speed(gas_col_[j]) * (1.0 - 1e-12));
                f.rho[k] = density_from_speed(gas_col_[j], vcap);
            }
    }

    const RadialProblem& p_;
    const ShockFront& front_;
    const FbpConfig& cfg_;
    double v1_;
    const BoundaryTrace& trace_;
    std::size_t ns_ = 0, nt_ = 0;
    double hs_ = 0.0, ht_ = 0.0;
    std::vector<double> fp_;
    std::vector<GasModel> gas_col_;
    std::vector<double> rho_, exit_flux_, sA_, sB_, tA_, tB_, diag_;
};

}  // namespace

ShockFront perturb_front(const RadialProblem& problem, double r_s, double amplitude,
                         int mode, unsigned seed, std::size_t ntheta) {
    if (problem.geom.dim != 2)
        throw std::invalid_argument("perturb_front: problem must have dim == 2");
    const auto& g = problem.geom;
    if (!(r_s > g.r0 && r_s < g.r1))
        throw std::domain_error("perturb_front: r_s must lie in (r0, r1)");
    if (amplitude < 0.0 ||
        amplitude >= std::min(r_s - g.r0, g.r1 - r_s))
        throw std::domain_error(
            "perturb_front: amplitude must be below min(r_s - r0, r1 - r_s)");
    if (mode < 0) throw std::invalid_argument("perturb_front: mode must be >= 0");
    if (ntheta < 4) throw std::invalid_argument("perturb_front: ntheta too small");

    ShockFront front;
    front.theta_w = g.half_angle;
    front.theta.resize(ntheta + 1);
    front.f.assign(ntheta + 1, r_s);
    const double ht = 2.0 * g.half_angle / static_cast<double>(ntheta);
    for (std::size_t j = 0; j <= ntheta; ++j)
        front.theta[j] = -g.half_angle + ht * static_cast<double>(j);
    front.theta[ntheta] = g.half_angle;

    if (amplitude == 0.0) return front;

    if (mode >= 1) {
        for (std::size_t j = 0; j <= ntheta; ++j)
            front.f[j] = r_s + amplitude *
                                   std::cos(mode * kPi * front.theta[j] / g.half_angle);
        return front;
    }

    // mode == 0: smooth seeded noise over wall-orthogonal cosine modes 1..4
    std::mt19937 rng(seed);
    double coef[4];
    for (double& c : coef)
        c = 2.0 * (static_cast<double>(rng()) / 4294967296.0) - 1.0;
    std::vector<double> raw(ntheta + 1, 0.0);
    double peak = 0.0;
    for (std::size_t j = 0; j <= ntheta; ++j) {
        const double u = (front.theta[j] + g.half_angle) / (2.0 * g.half_angle);
        double acc = 0.0;
        for (int k = 1; k <= 4; ++k) acc += coef[k - 1] * std::cos(k * kPi * u);
        raw[j] = acc;
        peak = std::max(peak, std::fabs(acc));
    }
    if (peak > 1e-12)
        for (std::size_t j = 0; j <= ntheta; ++j)
            front.f[j] = r_s + amplitude * raw[j] / peak;
    return front;
}

BoundaryTrace supersonic_trace(const RadialProblem& problem, const ShockFront& front) {
    validate_front(problem, front);
    const SupersonicSpline sp = build_supersonic_spline(problem, 4097);
    const std::size_t n = front.f.size();
    BoundaryTrace trace;
    trace.g.resize(n);
    trace.phi_minus.resize(n);
    trace.v_minus.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        trace.v_minus[j] = branch_speed(problem, front.f[j], Branch::supersonic);
        trace.phi_minus[j] = spline_phi(sp, front.f[j]);
        trace.g[j] = problem.a0 / pow_int(front.f[j], problem.geom.dim - 1);
    }
    return trace;
}

Field2D solve_subsonic(const RadialProblem& problem, const ShockFront& front,
                       const FbpConfig& config, double v1,
                       const Field2D* initial_guess) {
    validate_front(problem, front);
    const BoundaryTrace trace = supersonic_trace(problem, front);
    SubsonicSolver solver(problem, front, config, v1, trace);
    return solver.solve(initial_guess);
}

ShockFront front_update(const ShockFront& front, const Field2D& field,
                        const BoundaryTrace& trace, const RadialProblem& problem,
                        double omega, bool* clipped) {
    const std::size_t nt = front.f.size() - 1;
    if (field.ntheta != nt)
        throw std::invalid_argument("front_update: field/front grids disagree");
    const double hs = 1.0 / static_cast<double>(field.nr);
    const std::vector<double> fp = front_slopes(front);

    // R-H mass-flux residual along the front, with the normal (1, -f'/r^2)
    std::vector<double> residual(nt + 1);
    double rho_bar = 0.0, v_minus_bar = 0.0;
    for (std::size_t j = 0; j <= nt; ++j) {
        const double L = field.r1 - front.f[j];
        const double dphi_r = (-3.0 * field.phi[field.idx(0, j)] +
                               4.0 * field.phi[field.idx(1, j)] -
                               field.phi[field.idx(2, j)]) /
                              (2.0 * hs) / L;
        // tangential derivative of the Dirichlet trace gives phi_theta exactly
        const double phi_theta = fp[j] * (trace.v_minus[j] - dphi_r);
        const double f = front.f[j];
        const double nu_flux = dphi_r - fp[j] * phi_theta / (f * f);
        const double speed = std::hypot(dphi_r, phi_theta / f);
        const GasModel& gcol = field.gas_col[j];
        const double cap = critical_speed(gcol) * (1.0 - 1e-9);
        const double rho = density_from_speed(gcol, std::min(speed, cap));
        residual[j] = rho * nu_flux - trace.g[j];
        rho_bar += rho / static_cast<double>(nt + 1);
        v_minus_bar += trace.v_minus[j] / static_cast<double>(nt + 1);
    }

    // Newton denominator from the radial family: sensitivity of the
    // flat-front residual (r1^(d-1) F(v1; post(x)) - a0)/x^(d-1) at the mean
    // front position.
    const auto& geom = problem.geom;
    double fbar = 0.0;
    for (double f : front.f) fbar += f / static_cast<double>(nt + 1);
    const double span = geom.r1 - geom.r0;
    const double delta = 1e-4 * span;
    const double xbar = std::clamp(fbar, geom.r0 + 2.0 * delta, geom.r1 - 2.0 * delta);
    auto flat_residual = [&](double x) {
        const ShockJump j = rh_jump(problem.gas,
                                    branch_speed(problem, x, Branch::supersonic));
        const double flux1 = pow_int(geom.r1, geom.dim - 1) *
                             density_from_speed(j.post, field.v1) * field.v1;
        return (flux1 - problem.a0) / pow_int(x, geom.dim - 1);
    };
    double dbar = (flat_residual(xbar + delta) - flat_residual(xbar - delta)) /
                  (2.0 * delta);
    dbar = std::min(dbar, -1e-12);  // stabilizing direction is negative

    // Spectral preconditioning: mode k of the residual sees the closure
    // feedback |dbar| plus the Dirichlet-to-Neumann response of the field,
    // rho v- chi coth(chi Lbar) with chi = k pi / (2 theta_w rbar).
    const double lbar = field.r1 - fbar;
    std::vector<double> rhat;
    dct1(residual, rhat);
    for (std::size_t k = 0; k < rhat.size(); ++k) {
        double mu;
        if (k == 0) {
            mu = 1.0 / lbar;
        } else {
            const double chi = static_cast<double>(k) * kPi /
                               (2.0 * front.theta_w * fbar);
            const double arg = chi * lbar;
            mu = chi * ((arg > 30.0) ? 1.0 : std::cosh(arg) / std::sinh(arg));
        }
        rhat[k] = omega * rhat[k] / (std::fabs(dbar) + rho_bar * v_minus_bar * mu);
    }
    std::vector<double> df;
    idct1(rhat, df);

    ShockFront next = front;
    next.iteration = front.iteration + 1;
    const double hr = span / static_cast<double>(field.nr);
    bool any_clip = false;
    for (std::size_t j = 0; j <= nt; ++j) {
        double f = front.f[j] + df[j];
        const double lo = geom.r0 + hr;
        const double hi = geom.r1 - hr;
        if (f < lo || f > hi) any_clip = true;
        next.f[j] = std::clamp(f, lo, hi);
    }
    if (clipped) *clipped = any_clip;
    return next;
}

UniquenessMetrics check_uniqueness(const ShockFront& front, const Field2D& field,
                                   const TransonicShockSolution& reference) {
    const RadialProblem& p = reference.problem;
    UniquenessMetrics m;
    const double hr = (p.geom.r1 - p.geom.r0) / static_cast<double>(field.nr);
    for (double f : front.f)
        m.front_dev_cells = std::max(m.front_dev_cells,
                                     std::fabs(f - reference.r_s) / hr);

    double vmax_ref = 0.0, linf = 0.0, sum2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i <= field.nr; ++i)
        for (std::size_t j = 0; j <= field.ntheta; ++j) {
            const double r = field.f[j] + field.s[i] * (field.r1 - field.f[j]);
            const double vref = branch_speed_for(reference.jump.post, p.a0, p.geom.dim,
                                                 r, Branch::subsonic);
            const double dv = field.speed[field.idx(i, j)] - vref;
            vmax_ref = std::max(vmax_ref, vref);
            linf = std::max(linf, std::fabs(dv));
            sum2 += dv * dv;
            ref2 += vref * vref;
        }
    m.speed_linf_rel = linf / vmax_ref;
    m.speed_l2_rel = std::sqrt(sum2 / ref2);

    const BoundaryTrace trace = supersonic_trace(p, front);
    for (std::size_t j = 0; j <= field.ntheta; ++j)
        m.dirichlet_mismatch = std::max(
            m.dirichlet_mismatch,
            std::fabs(field.phi[field.idx(0, j)] - trace.phi_minus[j]));
    return m;
}

WallAngles check_perpendicularity(const ShockFront& front) {
    const std::size_t n = front.f.size();
    const double h = front.theta[1] - front.theta[0];
    WallAngles w;
    w.lo = (-3.0 * front.f[0] + 4.0 * front.f[1] - front.f[2]) / (2.0 * h);
    w.hi = (3.0 * front.f[n - 1] - 4.0 * front.f[n - 2] + front.f[n - 3]) / (2.0 * h);
    return w;
}

FbpResult run_fbp(const RadialProblem& problem, double v1, const ShockFront& initial,
                  const FbpConfig& config) {
    validate_front(problem, initial);
    if (initial.f.size() != config.ntheta + 1)
        throw std::invalid_argument("run_fbp: initial front must have ntheta+1 nodes");
    const AdmissibleInterval interval = admissible_interval(problem, 1e-9);
    if (!(v1 > interval.v_lo && v1 < interval.v_hi))
        throw OutOfIntervalError(v1, interval);

    const TransonicShockSolution ref = find_shock(problem, v1, 1e-12);

    FbpResult out;
    out.front = initial;
    out.report.r_s_ref = ref.r_s;
    Field2D field;
    bool have_field = false;

    Verdict verdict = Verdict::max_iterations;
    std::string diagnostics;
    for (std::size_t outer = 1; outer <= config.max_outer; ++outer) {
        out.report.outer_iterations = outer;
        double dev = 0.0;
        for (double f : out.front.f) dev = std::max(dev, std::fabs(f - ref.r_s));
        out.report.front_deviation_history.push_back(dev);

        const BoundaryTrace trace = supersonic_trace(problem, out.front);
        try {
            field = solve_subsonic(problem, out.front, config, v1,
                                   have_field ? &field : nullptr);
        } catch (const ConvergenceError& e) {
            diagnostics = e.what();
            break;
        }
        have_field = true;

        bool clipped = false;
        ShockFront next = front_update(out.front, field, trace, problem, config.omega,
                                       &clipped);
        out.report.clipped = out.report.clipped || clipped;

        double rh_res = 0.0;  // recompute max |R| for the history
        {
            // front_update already folded the residual into the move; report
            // the unpreconditioned flux mismatch for visibility
            const double hs = 1.0 / static_cast<double>(field.nr);
            const std::vector<double> fp = front_slopes(out.front);
            for (std::size_t j = 0; j <= config.ntheta; ++j) {
                const double L = field.r1 - out.front.f[j];
                const double dphi_r = (-3.0 * field.phi[field.idx(0, j)] +
                                       4.0 * field.phi[field.idx(1, j)] -
                                       field.phi[field.idx(2, j)]) /
                                      (2.0 * hs) / L;
                const double phi_theta = fp[j] * (trace.v_minus[j] - dphi_r);
                const double f = out.front.f[j];
                const double nu_flux = dphi_r - fp[j] * phi_theta / (f * f);
                const double speed = std::hypot(dphi_r, phi_theta / f);
                const GasModel& gcol = field.gas_col[j];
                const double cap = critical_speed(gcol) * (1.0 - 1e-9);
                const double rho = density_from_speed(gcol, std::min(speed, cap));
                rh_res = std::max(rh_res, std::fabs(rho * nu_flux - trace.g[j]));
            }
        }
        out.report.rh_residual_history.push_back(rh_res);

        double move = 0.0;
        bool bad = false;
        for (std::size_t j = 0; j <= config.ntheta; ++j) {
            move = std::max(move, std::fabs(next.f[j] - out.front.f[j]));
            if (!std::isfinite(next.f[j])) bad = true;
        }
        out.report.front_move_history.push_back(move);
        out.front = next;
        if (bad) {
            verdict = Verdict::diverged;
            diagnostics = "front update produced non-finite values";
            break;
        }
        if (move < config.front_tol) {
            verdict = Verdict::converged;
            break;
        }
    }

    if (have_field && verdict == Verdict::converged) {
        // final consistent field on the converged front
        field = solve_subsonic(problem, out.front, config, v1, &field);
    }
    out.field = field;
    out.report.final_field_residual = field.linear_residual;
    out.report.verdict = verdict;
    out.report.diagnostics = diagnostics;
    out.report.metrics = check_uniqueness(out.front, field, ref);
    out.report.perpendicularity = check_perpendicularity(out.front);
    const double ht = 2.0 * out.front.theta_w / static_cast<double>(config.ntheta);
    const double bound = 10.0 * config.front_tol / ht;
    out.report.perpendicularity_pass =
        std::fabs(out.report.perpendicularity.lo) <= bound &&
        std::fabs(out.report.perpendicularity.hi) <= bound;
    return out;
}

}  // namespace transonic
