#include "vfb/affine.hpp"

#include <cmath>
#include <stdexcept>

namespace vfb {

double affine_acceleration(double lambda, double delta,
                           const EquationOfState& eos)
{
    if (!(lambda > 0.0))
        throw std::domain_error("affine factor must stay positive");
    return 2.0 * delta * (1.0 + eos.alpha) * std::pow(lambda, -(1.0 + eos.beta));
}

double affine_energy(const AffineState& s, double delta,
                     const EquationOfState& eos)
{
    if (!(s.lambda > 0.0))
        throw std::domain_error("affine factor must stay positive");
    return 0.5 * s.lambda_dot * s.lambda_dot
           + (2.0 * delta * (1.0 + eos.alpha) / eos.beta)
                 * std::pow(s.lambda, -eos.beta);
}

std::vector<AffineState> integrate_affine(double lambda0, double lambda_dot0,
                                          double delta,
                                          const EquationOfState& eos,
                                          const std::vector<double>& t_targets,
                                          double dt_max)
{
    if (!(lambda0 > 0.0))
        throw std::domain_error("affine factor must stay positive");
    if (!(dt_max > 0.0))
        throw std::invalid_argument("step bound must be positive");
    for (std::size_t i = 0; i < t_targets.size(); ++i) {
        double t = t_targets[i];
        if (!(t >= 0.0) || (i > 0 && !(t > t_targets[i - 1])))
            throw std::invalid_argument(
                "target times must be nonnegative and increasing");
    }

    AffineState s{0.0, lambda0, lambda_dot0};
    std::vector<AffineState> out;
    out.reserve(t_targets.size());

    auto rk4 = [&](AffineState st, double dt) {
        double k1v = st.lambda_dot;
        double k1a = affine_acceleration(st.lambda, delta, eos);
        double k2v = st.lambda_dot + 0.5 * dt * k1a;
        double k2a = affine_acceleration(st.lambda + 0.5 * dt * k1v, delta, eos);
        double k3v = st.lambda_dot + 0.5 * dt * k2a;
        double k3a = affine_acceleration(st.lambda + 0.5 * dt * k2v, delta, eos);
        double k4v = st.lambda_dot + dt * k3a;
        double k4a = affine_acceleration(st.lambda + dt * k3v, delta, eos);
        st.lambda += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        st.lambda_dot += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        st.t += dt;
        return st;
    };

    for (double target : t_targets) {
        double gap = target - s.t;
        if (gap > 0.0) {
            int nsub = static_cast<int>(std::ceil(gap / dt_max));
            double dt = gap / nsub;
            for (int i = 0; i < nsub; ++i) s = rk4(s, dt);
            s.t = target; // kill accumulated roundoff in the clock
        }
        out.push_back(s);
    }
    return out;
}

RescaledAffine to_rescaled(const AffineState& s)
{
    RescaledAffine r;
    r.tau = std::log1p(s.t);
    r.value = s.lambda / (1.0 + s.t);
    r.rate = s.lambda_dot - r.value;
    return r;
}

AffineState from_rescaled(const RescaledAffine& r)
{
    AffineState s;
    s.t = std::expm1(r.tau);
    s.lambda = r.value * (1.0 + s.t);
    s.lambda_dot = r.rate + r.value;
    return s;
}

double rescaled_ode_residual(const AffineState& s, double delta,
                             const EquationOfState& eos)
{
    RescaledAffine r = to_rescaled(s);
    double et = 1.0 + s.t; // e^{tau}
    double acc = affine_acceleration(s.lambda, delta, eos);
    double value_tt = acc * et - r.rate;
    double forcing = 2.0 * delta * (1.0 + eos.alpha)
                     * std::exp(-eos.beta * r.tau)
                     * std::pow(r.value, -(1.0 + eos.beta));
    return std::abs(value_tt + r.rate - forcing);
}

std::vector<RescaledAffine> oracle_rescaled(double lambda0, double lambda_dot0,
                                            double delta,
                                            const EquationOfState& eos,
                                            const std::vector<double>& taus,
                                            double dt_max)
{
    std::vector<double> times;
    times.reserve(taus.size());
    for (double tau : taus) {
        if (!(tau >= 0.0))
            throw std::invalid_argument("rescaled times must be nonnegative");
        times.push_back(std::expm1(tau));
    }
    std::vector<AffineState> states =
        integrate_affine(lambda0, lambda_dot0, delta, eos, times, dt_max);
    std::vector<RescaledAffine> out;
    out.reserve(states.size());
    for (const AffineState& s : states) out.push_back(to_rescaled(s));
    return out;
}

double affine_3d_residual(double lambda, double lambda_ddot, double delta,
                          const EquationOfState& eos,
                          const EnthalpyProfile& profile,
                          const std::array<double, 3>& x, double h)
{
    (void)delta;
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(r + h < 1.0))
        throw std::invalid_argument("stencil leaves the unit ball");

    auto pressure_weight = [&](const std::array<double, 3>& p) {
        double rr = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        return std::pow(profile.w(rr), 1.0 + profile.alpha);
    };

    double wa = std::pow(profile.w(r), profile.alpha);
    double scale = std::pow(lambda, -(1.0 + eos.beta));
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double grad = (pressure_weight(xp) - pressure_weight(xm)) / (2.0 * h);
        worst = std::max(worst, std::abs(wa * lambda_ddot * x[i] + scale * grad));
    }
    return worst;
}

} // namespace vfb
