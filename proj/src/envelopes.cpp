#include "vfb/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vfb {

namespace {

double simpson(double a, double b, double fa, double fm, double fb)
{
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double eps,
                     int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
           + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-12)
{
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(a, b, fa, fm, fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole,
                         eps * (1.0 + std::abs(whole)), 40);
}

std::function<double(double)> poly_exp(int power, double rate)
{
    return [power, rate](double t) {
        double p = power == 2 ? t * t : (power == 1 ? t : 1.0);
        return p * std::exp(rate * t);
    };
}

} // namespace

DecayEnvelopes decay_envelopes(double beta)
{
    TimeWeights tw = time_weights(beta);
    double s1 = tw.sigma1, s2 = tw.sigma2;
    DecayEnvelopes env;
    env.beta = beta;
    env.sigma1 = s1;
    env.sigma2 = s2;

    auto three_way = [&](double lhs, double rhs, double below_rate) {
        if (lhs > rhs) return poly_exp(1, -2.0);
        if (lhs == rhs) return poly_exp(2, -2.0);
        return poly_exp(1, below_rate);
    };

    env.G[0] = three_way(2.0 * s1, 2.0 + s2, s2 - 2.0 * s1);
    env.G[1] = (s1 == 2.0 + s2) ? poly_exp(2, -2.0) : poly_exp(1, s2 - s1);
    env.G[2] = three_way(2.0 * beta, 2.0 + s2, s2 - 2.0 * beta);
    env.G[3] = three_way(s1, 1.0, -2.0 * s1);
    env.G[4] = (s1 == 2.0) ? poly_exp(2, -2.0) : poly_exp(1, -s1);
    env.G[5] = three_way(beta, 1.0, -2.0 * beta);

    for (int i = 0; i < 6; ++i) {
        auto g = env.G[i];
        env.Gt[i] = [g, s1](double t) {
            auto f = [&](double u) { return std::exp(0.5 * s1 * u) * g(u); };
            return adaptive_simpson(f, 0.0, t);
        };
    }

    if (s1 < s2) env.H1 = poly_exp(0, s2 - s1);
    else if (s1 == s2) env.H1 = poly_exp(2, 0.0);
    else env.H1 = poly_exp(0, 0.0);

    if (s1 < 2.0 * s2) env.H2 = poly_exp(0, s2 - 0.5 * s1);
    else if (s1 == 2.0 * s2) env.H2 = poly_exp(1, 0.0);
    else env.H2 = poly_exp(0, 0.0);

    return env;
}

EnvelopeChecks envelope_checks(const DecayEnvelopes& env, double tau_max,
                               double bound)
{
    constexpr int K = 1000;
    const double dt = tau_max / K;
    const double s1 = env.sigma1, s2 = env.sigma2;

    // values[i][k] = e^{-s2 t_k} * (Gt_i or H_j)(t_k); the Gt integrals are
    // accumulated incrementally so the whole sweep stays O(K).
    std::array<std::vector<double>, 8> values;
    for (auto& v : values) v.assign(K + 1, 0.0);

    for (int i = 0; i < 6; ++i) {
        auto g = env.G[i];
        auto f = [&](double u) { return std::exp(0.5 * s1 * u) * g(u); };
        double acc = 0.0;
        values[i][0] = 0.0;
        for (int k = 1; k <= K; ++k) {
            double a = (k - 1) * dt, b = k * dt;
            acc += adaptive_simpson(f, a, b, 1e-14);
            values[i][k] = std::exp(-s2 * b) * acc;
        }
    }
    for (int k = 0; k <= K; ++k) {
        double t = k * dt;
        values[6][k] = std::exp(-s2 * t) * env.H1(t);
        values[7][k] = std::exp(-s2 * t) * env.H2(t);
    }

    EnvelopeChecks out;
    out.bounded = true;
    for (int i = 0; i < 8; ++i) {
        double mx = 0.0, mass = 0.0;
        for (int k = 0; k <= K; ++k) {
            double v = values[i][k];
            if (!std::isfinite(v)) out.bounded = false;
            mx = std::max(mx, std::abs(v));
            double wght = (k == 0 || k == K) ? 0.5 : 1.0;
            mass += wght * v * dt;
        }
        out.max_value = std::max(out.max_value, mx);
        out.mass[i] = mass;

        double last = values[i][K], prev = values[i][K - 1];
        double tail;
        if (last == 0.0) {
            tail = 0.0;
        } else if (prev > 0.0 && last > 0.0 && last < prev) {
            double rate = std::log(prev / last) / dt; // terminal decay rate
            tail = last / (rate * mass);
        } else {
            tail = std::numeric_limits<double>::infinity();
        }
        out.tail[i] = tail;
        out.worst_tail = std::max(out.worst_tail, tail);
    }
    if (out.max_value > bound) out.bounded = false;
    return out;
}

ThetaLimit theta_limit(const RadialRun& run, const RadialGrid& grid,
                       const EnthalpyProfile& profile,
                       const EquationOfState& eos, const CutoffPair& cutoffs,
                       int N)
{
    if (run.frames.size() < 4)
        throw std::invalid_argument("limit extraction needs at least 4 frames");
    TimeWeights tw = time_weights(eos.beta);
    double tau_max = run.frames.back().tau;
    if (std::exp(-0.5 * tw.sigma1 * tau_max) > 0.05)
        throw std::invalid_argument(
            "horizon too short for the terminal state to have settled");

    const std::vector<double>& phi_end = run.frames.back().phi;
    ThetaLimit out;
    out.expected_rate = 0.5 * tw.sigma1;

    std::vector<double> diff(grid.n);
    for (std::size_t i = 0; i + 1 < run.frames.size(); ++i) {
        for (int j = 0; j < grid.n; ++j)
            diff[j] = run.frames[i].phi[j] - phi_end[j];
        out.taus.push_back(run.frames[i].tau);
        out.distances.push_back(
            std::sqrt(x_total(x_norm_sq(diff, grid, profile, cutoffs, N))));
    }

    // Least-squares fit of log d(tau) ~ log c - rate tau over the middle
    // window, skipping distances at roundoff level.
    double lo = 0.1 * tau_max, hi = 0.5 * tau_max;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < out.taus.size(); ++i) {
        double t = out.taus[i], d = out.distances[i];
        if (t < lo || t > hi || !(d > 1e-15)) continue;
        double y = std::log(d);
        sx += t; sy += y; sxx += t * t; sxy += t * y;
        ++count;
    }
    if (count < 2)
        throw std::invalid_argument("fit window holds fewer than 2 usable frames");
    double denom = count * sxx - sx * sx;
    double slope = (count * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / count;
    out.fitted_rate = -slope;
    out.fitted_amplitude = std::exp(intercept);
    return out;
}

namespace {

// |k-th gradient|^2 of the scalar F(|x|) at radius r.
double scalar_grad_sq(const RadialScalar& F, int k, double r)
{
    switch (k) {
    case 0: {
        double v = F.derivs[0](r);
        return v * v;
    }
    case 1: {
        double v = F.derivs[1](r);
        return v * v;
    }
    case 2: {
        double f2 = F.derivs[2](r);
        double f1r = F.derivs[1](r) / r;
        return f2 * f2 + 2.0 * f1r * f1r;
    }
    default:
        throw std::invalid_argument("derivative order outside the implemented range");
    }
}

double midpoint_ball(const std::function<double(double)>& f, int n)
{
    double h = 1.0 / n, acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = (i + 0.5) * h;
        acc += f(r) * 4.0 * M_PI * r * r;
    }
    return acc * h;
}

} // namespace

std::vector<HardyProbeRow> hardy_probe(const RadialScalar& F, double alpha,
                                       int b, const std::vector<int>& levels)
{
    if (!(alpha > 0.0) || alpha > 2.0 * b)
        throw std::domain_error("weight power must satisfy 0 < alpha <= 2b");
    if (b < 1 || b > 2)
        throw std::invalid_argument("derivative order outside the implemented range");
    if (static_cast<int>(F.derivs.size()) < b + 1)
        throw std::invalid_argument("test function is missing derivatives");

    double s = b - 0.5 * alpha;
    int s0 = static_cast<int>(std::floor(s));
    int s1 = static_cast<int>(std::ceil(s));
    double t = s - s0;

    std::vector<HardyProbeRow> rows;
    for (int n : levels) {
        if (n < 8) throw std::invalid_argument("quadrature level too coarse");
        HardyProbeRow row;
        row.n = n;

        double weighted = 0.0;
        for (int k = 0; k <= b; ++k)
            weighted += midpoint_ball(
                [&](double r) {
                    return std::pow(1.0 - r, alpha + k) * scalar_grad_sq(F, k, r);
                },
                n);
        row.weighted = weighted;

        auto sobolev_sq = [&](int order) {
            double acc = 0.0;
            for (int k = 0; k <= order; ++k)
                acc += midpoint_ball(
                    [&](double r) { return scalar_grad_sq(F, k, r); }, n);
            return acc;
        };
        double lo = sobolev_sq(s0);
        row.fractional =
            (s1 == s0) ? lo : std::pow(lo, 1.0 - t) * std::pow(sobolev_sq(s1), t);
        row.ratio = row.fractional / row.weighted;
        rows.push_back(row);
    }
    return rows;
}

} // namespace vfb
