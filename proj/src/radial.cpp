#include "vfb/radial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vfb {

RadialSolver::RadialSolver(const EquationOfState& eos,
                           const EnthalpyProfile& profile,
                           const SolverConfig& cfg)
    : eos_(eos), profile_(profile), cfg_(cfg), grid_(cfg.n)
{
    if (cfg.dtau <= 0.0 || cfg.tau_max <= 0.0)
        throw std::invalid_argument("time step and horizon must be positive");
    if (cfg.output_stride < 1)
        throw std::invalid_argument("output stride must be at least 1");
    if (cfg.r_asymptotic <= 0.0 || cfg.r_asymptotic >= 1.0)
        throw std::invalid_argument("asymptotic radius must lie in (0,1)");
    if (profile.delta < 0.0)
        throw std::invalid_argument("profile scale must be nonnegative");

    int n = grid_.n;
    w_node_.resize(n);
    dw_node_.resize(n);
    w_alpha_.resize(n);
    w_mid_1a_.resize(n - 1);
    for (int j = 0; j < n; ++j) {
        w_node_[j] = profile_.W(grid_.r[j]);
        dw_node_[j] = profile_.dW(grid_.r[j]);
        w_alpha_[j] = std::pow(w_node_[j], eos_.alpha);
    }
    for (int j = 0; j + 1 < n; ++j)
        w_mid_1a_[j] = std::pow(profile_.W(grid_.r[j] + 0.5 * grid_.h),
                                1.0 + eos_.alpha);
}

std::vector<double> RadialSolver::degenerate_flux_divergence(
    const std::vector<double>& phi) const
{
    const int n = grid_.n;
    const double h = grid_.h;
    const double a = eos_.alpha;
    if (static_cast<int>(phi.size()) != n)
        throw std::invalid_argument("state size does not match the grid");

    std::vector<double> phir = d1(phi, h, Parity::Odd);
    std::vector<double> s = over_r(phi, grid_);
    std::vector<double> sp = d1(s, h, Parity::Even);

    // Midpoint factored flux v = J^{-1/alpha} / phi_r; g = W^{1+alpha} v.
    std::vector<double> vmid(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        double dphi = (phi[j + 1] - phi[j]) / h;
        double smid = (phi[j + 1] + phi[j]) / (grid_.r[j + 1] + grid_.r[j]);
        double Jmid = dphi * smid * smid;
        vmid[j] = std::pow(Jmid, -1.0 / a) / dphi;
    }

    std::vector<double> L(n, 0.0);
    for (int j = 1; j + 1 < n; ++j) {
        double Jj = phir[j] * s[j] * s[j];
        double core = -2.0 * sp[j] / (phir[j] * s[j]); // source / g
        if (grid_.r[j] <= cfg_.r_asymptotic) {
            double gj = std::pow(w_node_[j], 1.0 + a) * std::pow(Jj, -1.0 / a);
            double flux = (w_mid_1a_[j] * vmid[j] - w_mid_1a_[j - 1] * vmid[j - 1]) / h;
            L[j] = (flux + gj * core) / w_alpha_[j];
        } else {
            L[j] = (1.0 + a) * dw_node_[j] * 0.5 * (vmid[j] + vmid[j - 1])
                   + w_node_[j] * (vmid[j] - vmid[j - 1]) / h
                   + w_node_[j] * std::pow(Jj, -1.0 / a) * core;
        }
    }
    double Jn = phir[n - 1] * s[n - 1] * s[n - 1];
    L[n - 1] = (1.0 + a) * dw_node_[n - 1] * std::pow(Jn, -1.0 / a) / phir[n - 1];
    return L;
}

void RadialSolver::acceleration(double tau, const std::vector<double>& phi,
                                const std::vector<double>& nu,
                                std::vector<double>& acc) const
{
    std::vector<double> L = degenerate_flux_divergence(phi);
    double front = profile_.delta * std::exp(-eos_.beta * tau);
    acc.resize(phi.size());
    acc[0] = 0.0;
    for (std::size_t j = 1; j < phi.size(); ++j)
        acc[j] = -nu[j] - front * L[j];
}

double RadialSolver::max_wave_speed(double tau,
                                    const std::vector<double>& phi) const
{
    if (profile_.delta == 0.0) return 0.0;
    const double a = eos_.alpha;
    std::vector<double> phir = d1(phi, grid_.h, Parity::Odd);
    std::vector<double> s = over_r(phi, grid_);
    double front = profile_.delta * (1.0 + 1.0 / a) * std::exp(-eos_.beta * tau);
    double cmax = 0.0;
    for (int j = 0; j < grid_.n; ++j) {
        double c2 = front * w_node_[j] * std::pow(phir[j], -(2.0 + 1.0 / a))
                    * std::pow(s[j], -2.0 / a);
        if (std::isfinite(c2) && c2 > 0.0) cmax = std::max(cmax, std::sqrt(c2));
    }
    return cmax;
}

void RadialSolver::step(double tau, std::vector<double>& phi,
                        std::vector<double>& nu, double dtau) const
{
    const std::size_t n = phi.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n);
    std::vector<double> p(n), v(n);

    acceleration(tau, phi, nu, k1);
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = phi[j] + 0.5 * dtau * nu[j];
        v[j] = nu[j] + 0.5 * dtau * k1[j];
    }
    acceleration(tau + 0.5 * dtau, p, v, k2);
    std::vector<double> v1 = v; // nu used in stage 2 position update
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = phi[j] + 0.5 * dtau * v1[j];
        v[j] = nu[j] + 0.5 * dtau * k2[j];
    }
    acceleration(tau + 0.5 * dtau, p, v, k3);
    std::vector<double> v2 = v;
    for (std::size_t j = 0; j < n; ++j) {
        p[j] = phi[j] + dtau * v2[j];
        v[j] = nu[j] + dtau * k3[j];
    }
    acceleration(tau + dtau, p, v, k4);
    for (std::size_t j = 0; j < n; ++j) {
        phi[j] += dtau / 6.0 * (nu[j] + 2.0 * v1[j] + 2.0 * v2[j] + v[j]);
        nu[j] += dtau / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
}

namespace {

// Returns an error description, or empty when the state is admissible.
std::string admissibility_error(const RadialGrid& grid,
                                const std::vector<double>& phi,
                                const std::vector<double>& nu)
{
    std::vector<double> phir = d1(phi, grid.h, Parity::Odd);
    std::vector<double> s = over_r(phi, grid);
    for (int j = 0; j < grid.n; ++j) {
        if (!std::isfinite(phi[j]) || !std::isfinite(nu[j])) {
            std::ostringstream os;
            os << "non-finite state at r = " << grid.r[j];
            return os.str();
        }
        if (phir[j] <= 0.0 || s[j] <= 0.0) {
            std::ostringstream os;
            os << "flow map loses injectivity at r = " << grid.r[j]
               << " (phi_r = " << phir[j] << ", phi/r = " << s[j] << ")";
            return os.str();
        }
    }
    return {};
}

} // namespace

RadialRun RadialSolver::run(const std::function<double(double)>& phi0,
                            const std::function<double(double)>& nu0) const
{
    RadialRun out;
    const int n = grid_.n;
    long long steps = std::llround(cfg_.tau_max / cfg_.dtau);
    if (steps < 1) steps = 1;
    const double dtau = cfg_.tau_max / static_cast<double>(steps);
    out.dtau = dtau;
    out.frame_dtau = dtau * cfg_.output_stride;

    std::vector<double> phi(n), nu(n);
    for (int j = 0; j < n; ++j) {
        phi[j] = phi0(grid_.r[j]);
        nu[j] = nu0(grid_.r[j]);
    }
    phi[0] = 0.0;
    nu[0] = 0.0;

    auto record = [&](double tau) {
        out.frames.push_back(RadialFrame{tau, phi, nu});
    };

    std::string err = admissibility_error(grid_, phi, nu);
    if (!err.empty()) {
        out.status = RunStatus::InvertedMap;
        out.message = "initial data: " + err;
        return out;
    }
    record(0.0);

    for (long long k = 0; k < steps; ++k) {
        double tau = dtau * static_cast<double>(k);
        double cmax = max_wave_speed(tau, phi);
        if (cmax > 0.0 && dtau > cfg_.cfl * grid_.h / cmax) {
            std::ostringstream os;
            os << "dtau = " << dtau << " exceeds " << cfg_.cfl
               << " h / c at tau = " << tau
               << " (limit " << cfg_.cfl * grid_.h / cmax << ")";
            out.status = RunStatus::CflViolation;
            out.message = os.str();
            return out;
        }
        step(tau, phi, nu, dtau);
        err = admissibility_error(grid_, phi, nu);
        if (!err.empty()) {
            std::ostringstream os;
            os << err << " at tau = " << dtau * static_cast<double>(k + 1);
            out.status = RunStatus::InvertedMap;
            out.message = os.str();
            return out;
        }
        if ((k + 1) % cfg_.output_stride == 0 || k + 1 == steps)
            record(dtau * static_cast<double>(k + 1));
    }
    out.status = RunStatus::Completed;
    return out;
}

std::vector<RadialMapSpec> divergence_test_maps()
{
    std::vector<RadialMapSpec> maps;
    maps.push_back(RadialMapSpec{
        "cubic-expanding",
        [](double r) { return r * (1.0 + 0.1 * r * r); },
        [](double r) { return 1.0 + 0.3 * r * r; },
        [](double r) { return 0.6 * r; },
    });
    maps.push_back(RadialMapSpec{
        "cubic-contracting",
        [](double r) { return r * (1.2 - 0.15 * r * r); },
        [](double r) { return 1.2 - 0.45 * r * r; },
        [](double r) { return -0.9 * r; },
    });
    maps.push_back(RadialMapSpec{
        "sine",
        [](double r) { return 1.1 * std::sin(0.9 * r) / 0.9; },
        [](double r) { return 1.1 * std::cos(0.9 * r); },
        [](double r) { return -0.99 * std::sin(0.9 * r); },
    });
    return maps;
}

double radial_divergence_exact(const RadialMapSpec& map,
                               const EnthalpyProfile& profile, double alpha,
                               double r)
{
    if (r <= 0.0) throw std::domain_error("radius must be positive");
    double phi = map.phi(r), pr = map.phi_r(r), prr = map.phi_rr(r);
    double s = phi / r;
    double sp = (pr - s) / r;
    double J = pr * s * s;
    double Jp = prr * s * s + 2.0 * pr * s * sp;
    double W = profile.W(r), dW = profile.dW(r);
    double g = std::pow(W, 1.0 + alpha) * std::pow(J, -1.0 / alpha);
    double gp = (1.0 + alpha) * std::pow(W, alpha) * dW * std::pow(J, -1.0 / alpha)
                + std::pow(W, 1.0 + alpha) * (-1.0 / alpha)
                      * std::pow(J, -1.0 / alpha - 1.0) * Jp;
    double up = gp / pr - g * prr / (pr * pr);
    return up + 2.0 * g / (r * pr) - 2.0 * g / phi;
}

Vec3 cartesian_flux_divergence(const RadialMapSpec& map,
                               const EnthalpyProfile& profile, double alpha,
                               const Vec3& x, double h)
{
    auto flux = [&](const Vec3& y, int k, int i) {
        double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        double phi = map.phi(r), pr = map.phi_r(r);
        double s = phi / r;
        double J = pr * s * s;
        double g = std::pow(profile.W(r), 1.0 + alpha) * std::pow(J, -1.0 / alpha);
        double p = y[k] * y[i] / (r * r);
        double A = p / pr + ((k == i ? 1.0 : 0.0) - p) / s;
        return g * A;
    };
    Vec3 div{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            Vec3 yp = x, ym = x;
            yp[k] += h;
            ym[k] -= h;
            div[i] += (flux(yp, k, i) - flux(ym, k, i)) / (2.0 * h);
        }
    return div;
}

} // namespace vfb
