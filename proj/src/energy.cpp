#include "vfb/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vfb {

namespace {

constexpr int kMaxOrder = 2;

// [comp, r comp', r(r comp')'] for an odd radial component.
std::array<std::vector<double>, 3> scaling_stack(const std::vector<double>& comp,
                                                 const RadialGrid& grid)
{
    std::vector<double> d = d1(comp, grid.h, Parity::Odd);
    std::vector<double> dd = d2(comp, grid.h, Parity::Odd);
    std::vector<double> l1(grid.n), l2(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        double r = grid.r[j];
        l1[j] = r * d[j];
        l2[j] = r * d[j] + r * r * dd[j];
    }
    return {comp, l1, l2};
}

// Interior magnitudes: squared radial rectangular derivatives of the
// component, (d/dr)^m f for m = 0,1,2. Angular pieces drop for radial
// fields, so the interior sum carries plain derivatives at a flat w^alpha
// weight while the boundary sum grades the scaling derivatives Λ^m by
// w^{alpha+m}.
std::array<std::vector<double>, 3> gradient_magnitudes(
    const std::vector<double>& comp, const RadialGrid& grid)
{
    std::vector<double> d = d1(comp, grid.h, Parity::Odd);
    std::vector<double> dd = d2(comp, grid.h, Parity::Odd);
    std::vector<double> m0(grid.n), m1(grid.n), m2(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        m0[j] = comp[j] * comp[j];
        m1[j] = d[j] * d[j];
        m2[j] = dd[j] * dd[j];
    }
    return {m0, m1, m2};
}

struct FlowData {
    std::vector<double> phi_r, s, J;
};

FlowData flow_data(const std::vector<double>& phi, const RadialGrid& grid)
{
    FlowData f;
    f.phi_r = d1(phi, grid.h, Parity::Odd);
    f.s = over_r(phi, grid);
    f.J.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) f.J[j] = f.phi_r[j] * f.s[j] * f.s[j];
    return f;
}

} // namespace

std::vector<NormOrder> x_norm_sq(const std::vector<double>& comp,
                                 const RadialGrid& grid,
                                 const EnthalpyProfile& profile,
                                 const CutoffPair& cutoffs, int N)
{
    if (N < 0 || N > kMaxOrder)
        throw std::invalid_argument("norm order outside the implemented range");
    if (static_cast<int>(comp.size()) != grid.n)
        throw std::invalid_argument("component size does not match the grid");

    auto lam = scaling_stack(comp, grid);
    auto mag = gradient_magnitudes(comp, grid);

    std::vector<NormOrder> out(N + 1);
    std::vector<double> f(grid.n);
    for (int m = 0; m <= N; ++m) {
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            f[j] = cutoffs.psi(r) * std::pow(profile.w(r), profile.alpha + m)
                   * lam[m][j] * lam[m][j];
        }
        out[m].boundary = integrate_ball(f, grid);
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            f[j] = cutoffs.psi_bar(r) * std::pow(profile.w(r), profile.alpha)
                   * mag[m][j];
        }
        out[m].interior = integrate_ball(f, grid);
    }
    return out;
}

double x_total(const std::vector<NormOrder>& x)
{
    double t = 0.0;
    for (const NormOrder& o : x) t += o.total();
    return t;
}

double YNorms::grad_total() const
{
    double t = 0.0;
    for (const NormOrder& o : grad) t += o.total();
    return t;
}

double YNorms::div_total() const
{
    double t = 0.0;
    for (const NormOrder& o : div) t += o.total();
    return t;
}

double YNorms::curl_total() const
{
    double t = 0.0;
    for (const NormOrder& o : curl) t += o.total();
    return t;
}

YNorms y_norm_sq(const std::vector<double>& theta, const std::vector<double>& phi,
                 const RadialGrid& grid, const EnthalpyProfile& profile,
                 const EquationOfState& eos, const CutoffPair& cutoffs, int N)
{
    if (N < 0 || N > kMaxOrder)
        throw std::invalid_argument("norm order outside the implemented range");
    FlowData fd = flow_data(phi, grid);
    for (int j = 0; j < grid.n; ++j)
        if (!(fd.J[j] > 0.0))
            throw std::domain_error("flow Jacobian is not positive");

    auto lam = scaling_stack(theta, grid);

    YNorms out;
    out.grad.resize(N + 1);
    out.div.resize(N + 1);
    out.curl.resize(N + 1);

    std::vector<double> fg(grid.n), fv(grid.n);
    for (int m = 0; m <= N; ++m) {
        std::vector<double> up = d1(lam[m], grid.h, Parity::Odd);
        std::vector<double> uor = over_r(lam[m], grid);
        for (int j = 0; j < grid.n; ++j) {
            double a = up[j] / fd.phi_r[j];     // radial eigenvalue of grad_zeta
            double b = uor[j] / fd.s[j];        // tangential eigenvalue = u/phi
            double jw = std::pow(fd.J[j], -1.0 / eos.alpha);
            fg[j] = jw * (a * a + 2.0 * b * b);
            double dv = a + 2.0 * b;
            fv[j] = jw * dv * dv;
        }
        std::vector<double> tmp(grid.n);
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            tmp[j] = cutoffs.psi(r)
                     * std::pow(profile.w(r), 1.0 + profile.alpha + m) * fg[j];
        }
        out.grad[m].boundary = integrate_ball(tmp, grid);
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            tmp[j] = cutoffs.psi_bar(r)
                     * std::pow(profile.w(r), 1.0 + profile.alpha) * fg[j];
        }
        out.grad[m].interior = integrate_ball(tmp, grid);
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            tmp[j] = cutoffs.psi(r)
                     * std::pow(profile.w(r), 1.0 + profile.alpha + m) * fv[j];
        }
        out.div[m].boundary = integrate_ball(tmp, grid);
        for (int j = 0; j < grid.n; ++j) {
            double r = grid.r[j];
            tmp[j] = cutoffs.psi_bar(r)
                     * std::pow(profile.w(r), 1.0 + profile.alpha) * fv[j];
        }
        out.div[m].interior = integrate_ball(tmp, grid);
        // grad_zeta of a spherical field is symmetric: curl channel vanishes.
        out.curl[m] = NormOrder{};
    }
    return out;
}

namespace {

double kinetic_scale(const EnthalpyProfile& profile)
{
    return profile.delta > 0.0 ? 1.0 / profile.delta : 1.0;
}

} // namespace

double energy_value(const std::vector<double>& theta,
                    const std::vector<double>& nu,
                    const std::vector<double>& phi, double tau,
                    const RadialGrid& grid, const EnthalpyProfile& profile,
                    const EquationOfState& eos, const CutoffPair& cutoffs,
                    int N)
{
    TimeWeights tw = time_weights(eos.beta);
    double xnu = x_total(x_norm_sq(nu, grid, profile, cutoffs, N));
    double xth = x_total(x_norm_sq(theta, grid, profile, cutoffs, N));
    YNorms y = y_norm_sq(theta, phi, grid, profile, eos, cutoffs, N);
    return kinetic_scale(profile) * std::exp(tw.sigma1 * tau) * xnu + xth
           + std::exp(-tw.sigma2 * tau)
                 * (y.grad_total() + y.div_total() / eos.alpha);
}

double damping_value(const std::vector<double>& theta,
                     const std::vector<double>& nu,
                     const std::vector<double>& phi, double tau,
                     const RadialGrid& grid, const EnthalpyProfile& profile,
                     const EquationOfState& eos, const CutoffPair& cutoffs,
                     int N)
{
    TimeWeights tw = time_weights(eos.beta);
    auto xnu = x_norm_sq(nu, grid, profile, cutoffs, N);
    YNorms y = y_norm_sq(theta, phi, grid, profile, eos, cutoffs, N);
    double xb = 0.0, yb = 0.0;
    for (const NormOrder& o : xnu) xb += o.boundary;
    for (std::size_t m = 0; m < y.grad.size(); ++m)
        yb += y.grad[m].boundary + y.div[m].boundary / eos.alpha;
    return kinetic_scale(profile) * (2.0 - tw.sigma1) * std::exp(tw.sigma1 * tau) * xb
           + tw.sigma2 * std::exp(-tw.sigma2 * tau) * yb;
}

AprioriFlags apriori_monitor(const std::vector<double>& phi, double current_S,
                             const RadialGrid& grid)
{
    FlowData fd = flow_data(phi, grid);
    double adev = 0.0, jdev = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        adev = std::max(adev, std::abs(1.0 / fd.phi_r[j] - 1.0));
        adev = std::max(adev, std::abs(1.0 / fd.s[j] - 1.0));
        jdev = std::max(jdev, std::abs(fd.J[j] - 1.0));
    }
    AprioriFlags f;
    f.S_ok = current_S < 1.0 / 3.0;
    f.A_ok = adev < 1.0 / 3.0;
    f.J_ok = jdev < 1.0 / 3.0;
    return f;
}

namespace {

// Per-frame ingredients of the zero-order identity, unscaled W throughout.
struct IdentityPieces {
    double energy = 0.0;    // kinetic + elastic (differentiated in tau)
    double half_damping = 0.0;
    double remainder = 0.0; // the nine-term collection
};

IdentityPieces identity_pieces(const RadialFrame& fr, const RadialGrid& grid,
                               const EnthalpyProfile& profile,
                               const EquationOfState& eos)
{
    const int n = grid.n;
    const double a = eos.alpha;
    TimeWeights tw = time_weights(eos.beta);
    double es1 = std::exp(tw.sigma1 * fr.tau);
    double es2 = std::exp(-tw.sigma2 * fr.tau);

    std::vector<double> theta(n);
    for (int j = 0; j < n; ++j) theta[j] = fr.phi[j] - grid.r[j];
    const std::vector<double>& nu = fr.nu;

    std::vector<double> f(n);
    auto wpow = [&](int j, double p) { return std::pow(profile.W(grid.r[j]), p); };

    // Kinetic channel.
    for (int j = 0; j < n; ++j) f[j] = wpow(j, a) * nu[j] * nu[j];
    double knorm = integrate_ball(f, grid);

    IdentityPieces out;
    if (profile.delta == 0.0) {
        // Pure damping flow: only the kinetic channel of the identity
        // survives in the lab equation.
        out.energy = 0.5 * es1 * knorm;
        out.half_damping = 0.5 * (2.0 - tw.sigma1) * es1 * knorm;
        out.remainder = 0.0;
        return out;
    }
    double invd = 1.0 / profile.delta;

    FlowData fd = flow_data(fr.phi, grid);
    std::vector<double> tp = d1(theta, grid.h, Parity::Odd);
    std::vector<double> np = d1(nu, grid.h, Parity::Odd);
    std::vector<double> t_or = over_r(theta, grid);
    std::vector<double> n_or = over_r(nu, grid);

    std::vector<double> grad2(n), dv(n), jw(n), theta_ophi(n), nu_ophi(n);
    for (int j = 0; j < n; ++j) {
        theta_ophi[j] = t_or[j] / fd.s[j]; // theta / phi
        nu_ophi[j] = n_or[j] / fd.s[j];    // nu / phi
        double ar = tp[j] / fd.phi_r[j];
        grad2[j] = ar * ar + 2.0 * theta_ophi[j] * theta_ophi[j];
        dv[j] = ar + 2.0 * theta_ophi[j];
        jw[j] = std::pow(fd.J[j], -1.0 / a);
    }

    for (int j = 0; j < n; ++j)
        f[j] = wpow(j, 1.0 + a) * jw[j]
               * (0.5 * grad2[j] + dv[j] * dv[j] / (2.0 * a));
    double elastic = integrate_ball(f, grid);
    out.energy = 0.5 * invd * es1 * knorm + es2 * elastic;

    for (int j = 0; j < n; ++j)
        f[j] = wpow(j, 1.0 + a) * jw[j] * (grad2[j] + dv[j] * dv[j] / a);
    double ydamp = integrate_ball(f, grid);
    out.half_damping = 0.5 * (2.0 - tw.sigma1) * invd * es1 * knorm
                       + 0.5 * tw.sigma2 * es2 * ydamp;

    // Nine-term remainder; the two curl terms vanish for spherical states.
    for (int j = 0; j < n; ++j) {
        double W1a = wpow(j, 1.0 + a);
        double theta_rate = np[j] / fd.phi_r[j] + 2.0 * nu_ophi[j]; // div_zeta nu
        double jdot_over_j = theta_rate;
        double r1 = -(1.0 + a) * wpow(j, a) * profile.dW(grid.r[j]) * nu[j];
        double r2 = -W1a * jw[j]
                    * (tp[j] * tp[j] * np[j] / (fd.phi_r[j] * fd.phi_r[j])
                       + 2.0 * theta_ophi[j] * theta_ophi[j] * n_or[j]);
        double r3 = W1a * (jw[j] - 1.0) * (np[j] + 2.0 * n_or[j]);
        double r4 = -W1a * jw[j] * jdot_over_j * grad2[j] / (2.0 * a);
        double r5 = -W1a * jw[j]
                    * (tp[j] * tp[j] * np[j]
                           / (fd.phi_r[j] * fd.phi_r[j] * fd.phi_r[j])
                       + 2.0 * theta_ophi[j] * theta_ophi[j] * nu_ophi[j]);
        double r8 = -W1a * jw[j] * jdot_over_j * dv[j] * dv[j] / (2.0 * a * a);
        double ddot = theta_rate
                      - (tp[j] * np[j] / (fd.phi_r[j] * fd.phi_r[j])
                         + 2.0 * theta_ophi[j] * nu_ophi[j]);
        double r9 = W1a * jw[j] * dv[j] * ddot / a;
        f[j] = r1 + r2 + r3 + r4 + r5 + r8 + r9;
    }
    out.remainder = es2 * integrate_ball(f, grid);
    return out;
}

} // namespace

std::vector<double> zero_order_residual_series(const RadialRun& run,
                                               const RadialGrid& grid,
                                               const EnthalpyProfile& profile,
                                               const EquationOfState& eos)
{
    const int F = static_cast<int>(run.frames.size());
    if (F < 3)
        throw std::invalid_argument("zero-order residual needs at least 3 frames");

    std::vector<IdentityPieces> p(F);
    for (int i = 0; i < F; ++i)
        p[i] = identity_pieces(run.frames[i], grid, profile, eos);

    std::vector<double> res(F, std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i + 1 < F; ++i) {
        double dt = run.frames[i + 1].tau - run.frames[i - 1].tau;
        double de = (p[i + 1].energy - p[i - 1].energy) / dt;
        res[i] = std::abs(de + p[i].half_damping - p[i].remainder);
    }
    return res;
}

std::vector<EnergyReport> analyze_run(const RadialRun& run,
                                      const RadialGrid& grid,
                                      const EnthalpyProfile& profile,
                                      const EquationOfState& eos,
                                      const CutoffPair& cutoffs, int N)
{
    TimeWeights tw = time_weights(eos.beta);
    std::vector<EnergyReport> out;
    out.reserve(run.frames.size());

    std::vector<double> residuals;
    if (run.frames.size() >= 3)
        residuals = zero_order_residual_series(run, grid, profile, eos);
    else
        residuals.assign(run.frames.size(),
                         std::numeric_limits<double>::quiet_NaN());

    double running_sup = 0.0;
    for (std::size_t i = 0; i < run.frames.size(); ++i) {
        const RadialFrame& fr = run.frames[i];
        std::vector<double> theta(grid.n);
        for (int j = 0; j < grid.n; ++j) theta[j] = fr.phi[j] - grid.r[j];

        EnergyReport rep;
        rep.tau = fr.tau;
        rep.x_theta = x_norm_sq(theta, grid, profile, cutoffs, N);
        rep.y_theta = y_norm_sq(theta, fr.phi, grid, profile, eos, cutoffs, N);
        double xnu = x_total(x_norm_sq(fr.nu, grid, profile, cutoffs, N));

        double value = kinetic_scale(profile) * std::exp(tw.sigma1 * fr.tau) * xnu
                       + x_total(rep.x_theta)
                       + std::exp(-tw.sigma2 * fr.tau)
                             * (rep.y_theta.grad_total()
                                + rep.y_theta.div_total() / eos.alpha);
        running_sup = std::max(running_sup, value);
        rep.S_N = running_sup;
        rep.C_N = std::exp(-tw.sigma2 * fr.tau) * rep.y_theta.curl_total();
        rep.damping = damping_value(theta, fr.nu, fr.phi, fr.tau, grid, profile,
                                    eos, cutoffs, N);
        rep.apriori = apriori_monitor(fr.phi, running_sup, grid);
        rep.res_zero_order = residuals[i];
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace vfb
