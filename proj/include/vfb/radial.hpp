#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vfb/grid.hpp"
#include "vfb/kinematics.hpp"
#include "vfb/params.hpp"
#include "vfb/weights.hpp"

namespace vfb {

// Discretization of the spherically symmetric flow equation
//   phi_tautau + phi_tau = -delta e^{-beta tau} W^{-alpha} D(phi),
//   D(phi) = d_r(g/phi_r) + 2g/(r phi_r) - 2g/phi,
//   g = W^{1+alpha} J^{-1/alpha},  J = phi_r (phi/r)^2,
// on r in [0,1] with phi(tau, 0) = 0 and the one-sided vacuum limit
//   W^{-alpha} D -> (1+alpha) W'(1) J^{-1/alpha} / phi_r at r = 1.
struct SolverConfig {
    int n = 129;             // radial nodes, r_j = j/(n-1)
    double dtau = 1e-3;      // RK4 step
    double tau_max = 1.0;
    int output_stride = 10;  // frames recorded every this many steps
    double cfl = 0.8;        // refuse to run when dtau > cfl h / c_max
    double r_asymptotic = 0.9; // switch to the W-factored form beyond this
};

enum class RunStatus { Completed, InvertedMap, CflViolation };

struct RadialFrame {
    double tau = 0.0;
    std::vector<double> phi;
    std::vector<double> nu;
};

struct RadialRun {
    RunStatus status = RunStatus::Completed;
    std::string message;
    std::vector<RadialFrame> frames;
    double dtau = 0.0;       // actual step used
    double frame_dtau = 0.0; // spacing between recorded frames
};

class RadialSolver {
public:
    RadialSolver(const EquationOfState& eos, const EnthalpyProfile& profile,
                 const SolverConfig& cfg);

    const RadialGrid& grid() const { return grid_; }
    const SolverConfig& config() const { return cfg_; }

    // L = W^{-alpha} D(phi), the degenerate flux divergence. Interior nodes
    // use conservative flux differences of g/phi_r with midpoint g; past
    // r_asymptotic the W factor is peeled off analytically so the truncation
    // error stays uniform up to the vacuum boundary; r = 1 uses the exact
    // one-sided limit. All pieces are second order in h.
    std::vector<double> degenerate_flux_divergence(const std::vector<double>& phi) const;

    // acc = -nu - delta e^{-beta tau} L(phi); acc[0] = 0 (center is pinned).
    void acceleration(double tau, const std::vector<double>& phi,
                      const std::vector<double>& nu,
                      std::vector<double>& acc) const;

    // Fastest degenerate sound speed on the grid,
    //   c^2 = delta (1 + 1/alpha) e^{-beta tau} W phi_r^{-(2+1/alpha)} (phi/r)^{-2/alpha}.
    double max_wave_speed(double tau, const std::vector<double>& phi) const;

    // One classical RK4 step of (phi, nu) in place.
    void step(double tau, std::vector<double>& phi, std::vector<double>& nu,
              double dtau) const;

    // Integrate from phi0(r), nu0(r) to tau_max, recording every
    // output_stride steps. Aborts with InvertedMap when phi_r or phi/r stops
    // being positive (or values stop being finite) and with CflViolation when
    // the configured dtau exceeds the stability bound.
    RadialRun run(const std::function<double(double)>& phi0,
                  const std::function<double(double)>& nu0) const;

private:
    EquationOfState eos_;
    EnthalpyProfile profile_;
    SolverConfig cfg_;
    RadialGrid grid_;
    std::vector<double> w_node_;      // W(r_j)
    std::vector<double> dw_node_;     // W'(r_j)
    std::vector<double> w_alpha_;     // W^alpha
    std::vector<double> w_mid_1a_;    // W(r_{j+1/2})^{1+alpha}
};

// Closed-form static test map phi(r) with first two derivatives, for
// validating the radial reduction of the pressure-flux divergence.
struct RadialMapSpec {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> phi_r;
    std::function<double(double)> phi_rr;
};

// Three smooth orientation-preserving maps of the unit ball.
std::vector<RadialMapSpec> divergence_test_maps();

// D(phi)(r) evaluated from the closed-form derivatives (no grid involved).
double radial_divergence_exact(const RadialMapSpec& map,
                               const EnthalpyProfile& profile, double alpha,
                               double r);

// Centered-difference divergence of the full tensor flux
// T^k_i = W^{1+alpha} J^{-1/alpha} A^k_i at a 3d point, spacing h. The
// exact value is radial_divergence_exact(r) * x/r.
Vec3 cartesian_flux_divergence(const RadialMapSpec& map,
                               const EnthalpyProfile& profile, double alpha,
                               const Vec3& x, double h);

} // namespace vfb
