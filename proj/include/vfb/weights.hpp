#pragma once

#include <functional>
#include <string>

namespace vfb {

// Radial enthalpy-like weight on the unit ball. W is the unscaled shape
// (W(0)=1 for the model profile) and w(r) = delta*W(r) is the physical
// weight; alpha is the equation-of-state exponent the weight is raised to.
// W and dW must be analytic callables: the solver and the quadratures never
// difference W numerically.
struct EnthalpyProfile {
    std::string name;
    double delta = 1.0;
    double alpha = 1.0;
    std::function<double(double)> W;   // unscaled shape, W >= 0 on [0,1], W(1)=0
    std::function<double(double)> dW;  // dW/dr, analytic

    double w(double r)  const { return delta * W(r); }
    double dw(double r) const { return delta * dW(r); }
};

// W(r) = 1 - r^2. Comparable to the boundary distance with constant 2:
// W/(1-r) = 1+r in [1,2].
EnthalpyProfile model_profile(double delta, double alpha);

// Named profiles: "model" (1-r^2), "linear" (1-r), and
// "quadratic-degenerate" ((1-r^2)^2, which violates the non-degeneracy
// check below and exists to exercise it). Throws std::invalid_argument for
// unknown names.
EnthalpyProfile named_profile(const std::string& name, double delta, double alpha);

// Result of the boundary non-degeneracy test: the profile must be comparable
// to the distance function, (1/C) (1-r) <= W(r) <= C (1-r) near r=1.
struct VacuumCheck {
    bool   pass = false;
    double C_observed = 0.0; // smallest comparability constant found
};

// Samples W/(1-r) on n_samples radii in [0, 1-1e-6] (the top radius is
// clamped there to avoid 0/0) and reports the observed comparability
// constant. Passes iff the ratio stays within [1/C_max, C_max].
VacuumCheck physical_vacuum_check(const EnthalpyProfile& profile,
                                  int n_samples = 1000,
                                  double C_max  = 1e3);

// Smooth radial partition of unity {psi, 1-psi}: psi == 0 on [0, r1],
// psi == 1 on [r0, 1], C^infinity exp(-1/x)-type ramp in between.
// psi weights the boundary region of the norms (where the scaling/rotation
// derivatives are the right frame), psi_bar = 1-psi the interior region
// (where plain partial derivatives are used).
class CutoffPair {
public:
    CutoffPair() : CutoffPair(0.5, 0.75) {}
    // Requires 0 < r1 < r0 < 1, else std::invalid_argument.
    CutoffPair(double r1, double r0);

    double psi(double r) const;
    double psi_bar(double r) const { return 1.0 - psi(r); }
    double inner_radius() const { return r1_; }
    double outer_radius() const { return r0_; }

private:
    double r1_;
    double r0_;
};

} // namespace vfb
