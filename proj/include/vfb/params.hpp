#pragma once

namespace vfb {

// Polytropic gas constants. The pressure law p = rho^gamma fixes the two
// derived exponents used everywhere else: alpha = 1/(gamma-1) is the enthalpy
// power (the initial enthalpy behaves like a distance-to-boundary function
// raised to 1/alpha), beta = 3*(gamma-1) is the decay rate of the pressure
// forcing in the self-similar variables.
struct EquationOfState {
    double gamma = 0.0;
    double alpha = 0.0;
    double beta  = 0.0;
};

// Split of the total decay exponent beta into the kinetic growth weight
// sigma1 (multiplying e^{+sigma1*tau} on velocity energy) and the potential
// decay weight sigma2 (multiplying e^{-sigma2*tau} on the pressure terms).
// Invariants: sigma1 + sigma2 = beta, sigma1 = min(beta, 2), sigma2 = 0
// exactly when beta <= 2.
struct TimeWeights {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

// Throws std::domain_error unless gamma > 1 and finite.
EquationOfState make_eos(double gamma);

// Throws std::domain_error unless beta > 0 and finite.
TimeWeights time_weights(double beta);

} // namespace vfb
