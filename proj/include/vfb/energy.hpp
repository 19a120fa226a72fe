#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vfb/grid.hpp"
#include "vfb/params.hpp"
#include "vfb/radial.hpp"
#include "vfb/weights.hpp"

namespace vfb {

// All diagnostics below are the spherically symmetric reductions: fields are
// radial components (theta means the field theta(r) x/r), quadrature is the
// trapezoid rule with 4 pi r^2 measure, and the profile weight w = delta W
// enters the norms while the unscaled W enters the energy identity.

struct NormOrder {
    double boundary = 0.0; // psi-weighted piece, weight w^{a+m} (a = alpha or 1+alpha)
    double interior = 0.0; // (1-psi)-weighted piece, order-independent weight
    double total() const { return boundary + interior; }
};

// Weighted Sobolev-type norm of a radial component. Per order m:
//   boundary: psi w^{alpha+m} |scaling-derivative^m comp|^2,
//   interior: (1-psi) w^alpha |m-th gradient of comp x/r|^2
// (the scaling derivative is r d/dr; gradient magnitudes are the exact
// tensor norms for spherical fields). Orders up to 2 are implemented;
// higher N throws std::invalid_argument.
std::vector<NormOrder> x_norm_sq(const std::vector<double>& comp,
                                 const RadialGrid& grid,
                                 const EnthalpyProfile& profile,
                                 const CutoffPair& cutoffs, int N);

double x_total(const std::vector<NormOrder>& x);

struct YNorms {
    std::vector<NormOrder> grad; // |grad_zeta (scaling^m theta)|^2 channel
    std::vector<NormOrder> div;  // (div_zeta ...)^2 channel
    std::vector<NormOrder> curl; // identically zero for spherical fields
    double grad_total() const;
    double div_total() const;
    double curl_total() const;
};

// Flow-metric functionals. Per order m the integrand carries J^{-1/alpha}
// and weight w^{1+alpha+m} (boundary) or w^{1+alpha} (interior); the
// derivative stack is the scaling derivative in both regions. Throws
// std::domain_error when J <= 0 anywhere on the grid.
YNorms y_norm_sq(const std::vector<double>& theta, const std::vector<double>& phi,
                 const RadialGrid& grid, const EnthalpyProfile& profile,
                 const EquationOfState& eos, const CutoffPair& cutoffs, int N);

// Instantaneous total-energy integrand
//   (1/delta) e^{s1 tau} |nu|_X^2 + |theta|_X^2
//   + e^{-s2 tau} |theta|_Ygrad^2 + (1/alpha) e^{-s2 tau} |theta|_Ydiv^2.
// When delta = 0 the kinetic channel is left unscaled.
double energy_value(const std::vector<double>& theta,
                    const std::vector<double>& nu,
                    const std::vector<double>& phi, double tau,
                    const RadialGrid& grid, const EnthalpyProfile& profile,
                    const EquationOfState& eos, const CutoffPair& cutoffs,
                    int N);

// Damping functional on the boundary cutoff:
//   (1/delta)(2-s1) e^{s1 tau} [psi-part of |nu|_X^2]
//   + s2 e^{-s2 tau} [psi-parts of |theta|_Ygrad^2 + (1/alpha)|theta|_Ydiv^2].
// Nonnegative for every state; identically zero at beta = 2.
double damping_value(const std::vector<double>& theta,
                     const std::vector<double>& nu,
                     const std::vector<double>& phi, double tau,
                     const RadialGrid& grid, const EnthalpyProfile& profile,
                     const EquationOfState& eos, const CutoffPair& cutoffs,
                     int N);

struct AprioriFlags {
    bool S_ok = true; // running energy sup < 1/3
    bool A_ok = true; // max(|1/phi_r - 1|, |r/phi - 1|) < 1/3 on the grid
    bool J_ok = true; // |J - 1| < 1/3 on the grid
};

AprioriFlags apriori_monitor(const std::vector<double>& phi, double current_S,
                             const RadialGrid& grid);

// Residual of the zero-order energy identity per frame: the tau derivative
// of the kinetic + elastic energy (unscaled W, 1/delta retained) plus half
// the zero-order damping, minus the nine-term remainder, with d/dtau by
// centered differences across recorded frames. First and last entries are
// NaN (no centered stencil). When delta = 0 only the kinetic channel of the
// identity survives. Throws std::invalid_argument for fewer than 3 frames.
std::vector<double> zero_order_residual_series(const RadialRun& run,
                                               const RadialGrid& grid,
                                               const EnthalpyProfile& profile,
                                               const EquationOfState& eos);

// Full per-frame diagnostics of a trajectory.
struct EnergyReport {
    double tau = 0.0;
    std::vector<NormOrder> x_theta; // per order
    YNorms y_theta;
    double S_N = 0.0;   // running sup of energy_value
    double C_N = 0.0;   // curl energy (zero for radial states)
    double damping = 0.0;
    AprioriFlags apriori;
    double res_zero_order = 0.0; // NaN at the ends
};

std::vector<EnergyReport> analyze_run(const RadialRun& run,
                                      const RadialGrid& grid,
                                      const EnthalpyProfile& profile,
                                      const EquationOfState& eos,
                                      const CutoffPair& cutoffs, int N);

// ---- decay envelopes ----

// Time-decay comparison functions, branch-selected by beta through
// s1 = min(beta, 2), s2 = max(beta - 2, 0):
//   G1 = t e^{-2t} | t^2 e^{-2t} | t e^{(s2-2s1)t}   as 2s1 >,=,< 2+s2
//   G2 = t^2 e^{-2t} if s1 = 2+s2, else t e^{(s2-s1)t}
//   G3 = t e^{-2t} | t^2 e^{-2t} | t e^{(s2-2b)t}    as 2b >,=,< 2+s2
//   G4 = t e^{-2t} | t^2 e^{-2t} | t e^{-2s1 t}      as s1 >,=,< 1
//   G5 = t^2 e^{-2t} if s1 = 2, else t e^{-s1 t}
//   G6 = t e^{-2t} | t^2 e^{-2t} | t e^{-2b t}       as b >,=,< 1
//   Gt_i(t) = integral_0^t e^{s1 u/2} G_i(u) du  (adaptive Simpson)
//   H1 = e^{(s2-s1)t} | t^2 | 1                      as s1 <,=,> s2
//   H2 = e^{(s2-s1/2)t} | t | 1                      as s1 <,=,> 2 s2
struct DecayEnvelopes {
    double beta = 0.0, sigma1 = 0.0, sigma2 = 0.0;
    std::array<std::function<double(double)>, 6> G;
    std::array<std::function<double(double)>, 6> Gt;
    std::function<double(double)> H1, H2;
};

DecayEnvelopes decay_envelopes(double beta);

// Bounded/integrable checks of e^{-s2 t} Gt_i and e^{-s2 t} H_j on [0, T]:
// max value against the bound, quadrature mass, and a relative tail
// estimate value(T)/(decay rate * mass) from the terminal log-slope
// (infinity when the terminal slope is not decaying).
struct EnvelopeChecks {
    bool bounded = false;
    double max_value = 0.0;
    std::array<double, 8> mass{};  // Gt1..Gt6, H1, H2
    std::array<double, 8> tail{};  // relative tail estimates
    double worst_tail = 0.0;
};

EnvelopeChecks envelope_checks(const DecayEnvelopes& env, double tau_max = 50.0,
                               double bound = 1e6);

// ---- limit extraction ----

struct ThetaLimit {
    std::vector<double> taus;      // frame times before the last
    std::vector<double> distances; // ||theta(tau) - theta(tau_end)||_X
    double fitted_rate = 0.0;      // least-squares slope of -log(distance)
    double fitted_amplitude = 0.0;
    double expected_rate = 0.0;    // s1 / 2
};

// Estimates the terminal state and the Cauchy decay rate by fitting
// log-distance on the window [0.1, 0.5] tau_max. Requires
// e^{-s1 tau_max/2} <= 0.05, else std::invalid_argument.
ThetaLimit theta_limit(const RadialRun& run, const RadialGrid& grid,
                       const EnthalpyProfile& profile,
                       const EquationOfState& eos, const CutoffPair& cutoffs,
                       int N);

// ---- boundary-weight embedding probe ----

// Scalar radial test function with analytic derivatives: derivs[k] is the
// k-th radial derivative.
struct RadialScalar {
    std::vector<std::function<double(double)>> derivs;
};

struct HardyProbeRow {
    int n = 0;          // quadrature resolution
    double weighted = 0.0;   // sum_k int (1-r)^{alpha+k} |d^k F|^2
    double fractional = 0.0; // unweighted Sobolev norm of order b - alpha/2
    double ratio = 0.0;      // fractional / weighted
};

// Ratio table across refinement levels; the fractional order is evaluated by
// log-convex interpolation between the neighboring integer orders, and the
// quadrature is the composite midpoint rule (integrands may have integrable
// endpoint singularities). Requires 0 < alpha <= 2b, else std::domain_error.
std::vector<HardyProbeRow> hardy_probe(const RadialScalar& F, double alpha,
                                       int b, const std::vector<int>& levels);

} // namespace vfb
