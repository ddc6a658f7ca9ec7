#include "transonic/gas.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace transonic {

namespace {
constexpr double kMinGammaGap = 1e-6;

// 1 + (gamma-1)(b0 - v^2/2); rho = K^(1/(gamma-1))
double bernoulli_kernel(const GasModel& gas, double v) {
    return 1.0 + (gas.gamma - 1.0) * (gas.b0 - 0.5 * v * v);
}
}  // namespace

GasModel::GasModel(double gamma_, double b0_) : gamma(gamma_), b0(b0_) {
    if (!(gamma >= 1.0 + kMinGammaGap)) {
        std::ostringstream os;
        os << "GasModel: gamma must be at least 1 + 1e-6 (got " << gamma << ")";
        throw std::invalid_argument(os.str());
    }
    if (!(1.0 + (gamma - 1.0) * b0 > 0.0)) {
        std::ostringstream os;
        os << "GasModel: 1 + (gamma-1)*b0 must be positive (got gamma=" << gamma
           << ", b0=" << b0 << ")";
        throw std::invalid_argument(os.str());
    }
}

double density_from_speed(const GasModel& gas, double v) {
    const double vmax = max_speed(gas);
    if (!(v >= 0.0) || v > vmax * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "density_from_speed: speed " << v << " outside admissible range [0, "
           << vmax << "]";
        throw std::domain_error(os.str());
    }
    const double k = bernoulli_kernel(gas, v);
    // the kernel cancels exactly at the vacuum speed; snap rounding residue
    const double k_eps = 64.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + (gas.gamma - 1.0) * (std::fabs(gas.b0) + 0.5 * v * v));
    if (k <= k_eps) return 0.0;
    return std::pow(k, 1.0 / (gas.gamma - 1.0));
}

double pressure(const GasModel& gas, double rho) {
    if (!(rho >= 0.0)) throw std::domain_error("pressure: density must be nonnegative");
    return std::pow(rho, gas.gamma) / gas.gamma;
}

double sound_speed(const GasModel& gas, double rho) {
    if (!(rho >= 0.0)) throw std::domain_error("sound_speed: density must be nonnegative");
    return std::pow(rho, 0.5 * (gas.gamma - 1.0));
}

double critical_speed(const GasModel& gas) {
    return std::sqrt(2.0 * (1.0 + (gas.gamma - 1.0) * gas.b0) / (gas.gamma + 1.0));
}

double max_speed(const GasModel& gas) {
    return std::sqrt(2.0 * (gas.b0 + 1.0 / (gas.gamma - 1.0)));
}

double mass_flux_density(const GasModel& gas, double v) {
    return density_from_speed(gas, v) * v;
}

double mass_flux_density_deriv(const GasModel& gas, double v) {
    // d(rho v)/dv = rho^(2-gamma) (K - v^2) with K = rho^(gamma-1)
    const double rho = density_from_speed(gas, v);
    if (rho == 0.0) {
        // one-sided limit at the vacuum speed; -inf for gamma > 2
        return (gas.gamma > 2.0) ? -std::numeric_limits<double>::infinity()
                                 : -v * v * std::pow(rho, 2.0 - gas.gamma);
    }
    const double k = bernoulli_kernel(gas, v);
    return std::pow(rho, 2.0 - gas.gamma) * (k - v * v);
}

}  // namespace transonic
