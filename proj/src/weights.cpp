#include "vfb/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfb {

EnthalpyProfile model_profile(double delta, double alpha)
{
    if (!std::isfinite(delta) || delta < 0.0)
        throw std::invalid_argument("model_profile: delta must be finite and >= 0");
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw std::invalid_argument("model_profile: alpha must be finite and > 0");
    EnthalpyProfile p;
    p.name  = "model";
    p.delta = delta;
    p.alpha = alpha;
    p.W  = [](double r) { return 1.0 - r * r; };
    p.dW = [](double r) { return -2.0 * r; };
    return p;
}

EnthalpyProfile named_profile(const std::string& name, double delta, double alpha)
{
    if (name == "model")
        return model_profile(delta, alpha);
    EnthalpyProfile p = model_profile(delta, alpha);
    p.name = name;
    if (name == "linear") {
        p.W  = [](double r) { return 1.0 - r; };
        p.dW = [](double) { return -1.0; };
    } else if (name == "quadratic-degenerate") {
        // Vanishes quadratically at r=1; fails the comparability check.
        p.W  = [](double r) { double q = 1.0 - r * r; return q * q; };
        p.dW = [](double r) { return -4.0 * r * (1.0 - r * r); };
    } else {
        throw std::invalid_argument("named_profile: unknown profile '" + name + "'");
    }
    return p;
}

VacuumCheck physical_vacuum_check(const EnthalpyProfile& profile,
                                  int n_samples, double C_max)
{
    if (n_samples < 2)
        throw std::invalid_argument("physical_vacuum_check: need at least 2 samples");
    if (!(C_max > 1.0))
        throw std::invalid_argument("physical_vacuum_check: C_max must be > 1");

    const double r_top = 1.0 - 1e-6;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double r = r_top * double(i) / double(n_samples - 1);
        double ratio = profile.W(r) / (1.0 - r);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    VacuumCheck out;
    out.C_observed = std::max(hi, lo > 0.0 ? 1.0 / lo : std::numeric_limits<double>::infinity());
    out.pass = (lo >= 1.0 / C_max) && (hi <= C_max);
    return out;
}

namespace {

// C^infinity bump ingredient: 0 for t<=0, exp(-1/t) for t>0.
double ramp(double t)
{
    return t <= 0.0 ? 0.0 : std::exp(-1.0 / t);
}

// Smooth step: 0 at t<=0, 1 at t>=1, strictly increasing in between.
double smooth_step(double t)
{
    double a = ramp(t);
    double b = ramp(1.0 - t);
    return a / (a + b);
}

} // namespace

CutoffPair::CutoffPair(double r1, double r0) : r1_(r1), r0_(r0)
{
    if (!(0.0 < r1 && r1 < r0 && r0 < 1.0))
        throw std::invalid_argument("CutoffPair: need 0 < r1 < r0 < 1");
}

double CutoffPair::psi(double r) const
{
    if (r <= r1_) return 0.0;
    if (r >= r0_) return 1.0;
    return smooth_step((r - r1_) / (r0_ - r1_));
}

} // namespace vfb
