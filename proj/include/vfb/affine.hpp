#pragma once

#include <array>
#include <vector>

#include "vfb/params.hpp"
#include "vfb/weights.hpp"

namespace vfb {

// Spatially affine motions eta(t, x) = lambda(t) x. The scalar factor obeys
//   lambda'' = 2 delta (1 + alpha) lambda^{-(1+beta)}
// in physical time (note beta = 3/alpha identically), with conserved energy
//   (1/2) lambda'^2 + (2 delta (1+alpha)/beta) lambda^{-beta}.

struct AffineState {
    double t = 0.0;
    double lambda = 1.0;
    double lambda_dot = 0.0;
};

// Right-hand side of the scalar ODE. Throws std::domain_error for lambda <= 0.
double affine_acceleration(double lambda, double delta,
                           const EquationOfState& eos);

double affine_energy(const AffineState& s, double delta,
                     const EquationOfState& eos);

// Integrates the scalar ODE from t = 0 with classical RK4, landing exactly on
// each requested time (gaps are subdivided so no step exceeds dt_max).
// Targets must be nonnegative and strictly increasing.
std::vector<AffineState> integrate_affine(double lambda0, double lambda_dot0,
                                          double delta,
                                          const EquationOfState& eos,
                                          const std::vector<double>& t_targets,
                                          double dt_max);

// Self-similar change of variables tau = log(1 + t):
//   value(tau) = e^{-tau} lambda(e^tau - 1),  rate = d value / d tau.
struct RescaledAffine {
    double tau = 0.0;
    double value = 1.0;
    double rate = 0.0;
};

RescaledAffine to_rescaled(const AffineState& s);

// Inverse of to_rescaled; exact round trip up to roundoff.
AffineState from_rescaled(const RescaledAffine& r);

// Residual of the damped rescaled ODE
//   value'' + value' = 2 delta (1+alpha) e^{-beta tau} value^{-(1+beta)}
// evaluated through the change of variables; analytically zero.
double rescaled_ode_residual(const AffineState& s, double delta,
                             const EquationOfState& eos);

// Integrates in physical time and reports the rescaled pair at each tau.
std::vector<RescaledAffine> oracle_rescaled(double lambda0, double lambda_dot0,
                                            double delta,
                                            const EquationOfState& eos,
                                            const std::vector<double>& taus,
                                            double dt_max);

// Residual of the full three-dimensional momentum balance on the affine
// ansatz at an interior point: max over components of
//   | w^alpha lambda'' x_i + lambda^{-(1+beta)} d_i(w^{1+alpha}) |
// with the spatial derivative replaced by a centered difference of width h.
// Second-order small for smooth profiles.
double affine_3d_residual(double lambda, double lambda_ddot, double delta,
                          const EquationOfState& eos,
                          const EnthalpyProfile& profile,
                          const std::array<double, 3>& x, double h);

} // namespace vfb
