// Polytropic gas closure for steady compressible potential flow.
// All thermodynamic quantities are pure functions of the flow speed (or
// density) and a GasModel; units are nondimensional with the reference
// state rho = 1, p = 1/gamma, c = 1.
#pragma once

namespace transonic {

// Adiabatic exponent plus the Bernoulli constant fixed by the incoming flow.
// Validated at construction:
//   gamma >= 1 + 1e-6          (strictly supercritical exponent)
//   1 + (gamma-1)*b0 > 0       (density well defined at rest)
struct GasModel {
    double gamma;
    double b0;

    GasModel(double gamma_, double b0_);
};

// rho(v^2) = (1 + (gamma-1)(b0 - v^2/2))^(1/(gamma-1)).
// Strictly decreasing in v on [0, max_speed]; zero at max_speed.
// Throws std::domain_error for v outside [0, max_speed].
double density_from_speed(const GasModel& gas, double v);

// p(rho) = rho^gamma / gamma.
double pressure(const GasModel& gas, double rho);

// c(rho) = rho^((gamma-1)/2).
double sound_speed(const GasModel& gas, double rho);

// Critical (sonic) speed c* = sqrt(2 (1 + (gamma-1) b0) / (gamma+1)).
// Flow with v < c* is subsonic, v > c* supersonic.
double critical_speed(const GasModel& gas);

// Vacuum speed sqrt(2 (b0 + 1/(gamma-1))); density vanishes exactly there.
double max_speed(const GasModel& gas);

// rho(v^2) * v.  Strictly unimodal: increasing on [0, c*], decreasing on
// [c*, max_speed], with maximum at v = c*.
double mass_flux_density(const GasModel& gas, double v);

// d/dv of mass_flux_density; vanishes only at v = c*.
double mass_flux_density_deriv(const GasModel& gas, double v);

}  // namespace transonic
