#include "transonic/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace transonic {

std::string format_csv(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile) {
    os << "r,v,rho,p,mach,phi\n";
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        const double c = sound_speed(profile.gas, profile.rho[i]);
        os << format_csv(profile.r[i]) << ',' << format_csv(profile.v[i]) << ','
           << format_csv(profile.rho[i]) << ','
           << format_csv(pressure(profile.gas, profile.rho[i])) << ','
           << format_csv(c > 0.0 ? profile.v[i] / c : 0.0) << ','
           << format_csv(profile.phi[i]) << '\n';
    }
}

nlohmann::ordered_json solution_to_json(const TransonicShockSolution& sol) {
    const SolutionResiduals res = solution_residuals(sol);
    nlohmann::ordered_json j;
    j["gamma"] = sol.problem.gas.gamma;
    j["b0"] = sol.problem.gas.b0;
    j["u0"] = sol.problem.u0;
    j["r0"] = sol.problem.geom.r0;
    j["r1"] = sol.problem.geom.r1;
    j["dim"] = sol.problem.geom.dim;
    j["rho0"] = sol.problem.rho0;
    j["a0"] = sol.problem.a0;
    j["r_s"] = sol.r_s;
    j["v1"] = sol.v1;
    j["jump"] = {{"v_minus", sol.jump.v_minus}, {"rho_minus", sol.jump.rho_minus},
                 {"p_minus", sol.jump.p_minus}, {"v_plus", sol.jump.v_plus},
                 {"rho_plus", sol.jump.rho_plus}, {"p_plus", sol.jump.p_plus},
                 {"b_post", sol.jump.post.b0}};
    j["residuals"] = {{"mass_max", res.mass_max},
                      {"bernoulli_max", res.bernoulli_max},
                      {"rh_flux", res.rh_flux},
                      {"phi_continuity", res.phi_continuity}};
    return j;
}

nlohmann::ordered_json interval_to_json(const AdmissibleInterval& interval,
                                        const RadialProblem& problem) {
    nlohmann::ordered_json j;
    j["v_lo"] = interval.v_lo;
    j["v_hi"] = interval.v_hi;
    j["open"] = true;
    j["gamma"] = problem.gas.gamma;
    j["b0"] = problem.gas.b0;
    j["u0"] = problem.u0;
    j["r0"] = problem.geom.r0;
    j["r1"] = problem.geom.r1;
    j["dim"] = problem.geom.dim;
    return j;
}

namespace {
const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::converged: return "converged";
        case Verdict::max_iterations: return "max-iterations";
        case Verdict::diverged: return "diverged";
    }
    return "unknown";
}
}  // namespace

nlohmann::ordered_json report_to_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["outer_iterations"] = rep.outer_iterations;
    j["r_s_ref"] = rep.r_s_ref;
    j["front_deviation_history"] = rep.front_deviation_history;
    j["rh_residual_history"] = rep.rh_residual_history;
    j["front_move_history"] = rep.front_move_history;
    j["final_field_residual"] = rep.final_field_residual;
    j["perpendicularity"] = {{"lo", rep.perpendicularity.lo},
                             {"hi", rep.perpendicularity.hi},
                             {"pass", rep.perpendicularity_pass}};
    j["metrics"] = {{"front_dev_cells", rep.metrics.front_dev_cells},
                    {"speed_linf_rel", rep.metrics.speed_linf_rel},
                    {"speed_l2_rel", rep.metrics.speed_l2_rel},
                    {"dirichlet_mismatch", rep.metrics.dirichlet_mismatch}};
    j["clipped"] = rep.clipped;
    j["diagnostics"] = rep.diagnostics;
    return j;
}

void write_map_csv(std::ostream& os, const std::vector<double>& r_s,
                   const std::vector<double>& v1) {
    os << "r_s,v1\n";
    for (std::size_t i = 0; i < r_s.size(); ++i)
        os << format_csv(r_s[i]) << ',' << format_csv(v1[i]) << '\n';
}

void write_front_history_csv(std::ostream& os,
                             const std::vector<ShockFront>& history) {
    os << "iteration,theta,f\n";
    for (const ShockFront& front : history)
        for (std::size_t j = 0; j < front.theta.size(); ++j)
            os << front.iteration << ',' << format_csv(front.theta[j]) << ','
               << format_csv(front.f[j]) << '\n';
}

void write_field_csv(std::ostream& os, const Field2D& field) {
    os << "r,theta,v_r,v_theta,speed,rho\n";
    for (std::size_t i = 0; i <= field.nr; ++i)
        for (std::size_t j = 0; j <= field.ntheta; ++j) {
            const std::size_t k = field.idx(i, j);
            const double r = field.f[j] + field.s[i] * (field.r1 - field.f[j]);
            os << format_csv(r) << ',' << format_csv(field.theta[j]) << ','
               << format_csv(field.v_r[k]) << ',' << format_csv(field.v_theta[k]) << ','
               << format_csv(field.speed[k]) << ',' << format_csv(field.rho[k]) << '\n';
        }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace transonic
