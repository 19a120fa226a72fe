#include "vfb/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace vfb {

Mat3 mat_identity()
{
    Mat3 m{};
    for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
    return m;
}

Mat3 mat_add(const Mat3& a, const Mat3& b)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] + b[i][j];
    return m;
}

Mat3 mat_sub(const Mat3& a, const Mat3& b)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - b[i][j];
    return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b)
{
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * b[k][j];
    return m;
}

Mat3 mat_scale(double c, const Mat3& a)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = c * a[i][j];
    return m;
}

Mat3 mat_transpose(const Mat3& a)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[j][i];
    return m;
}

Vec3 mat_apply(const Mat3& a, const Vec3& x)
{
    Vec3 y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += a[i][j] * x[j];
    return y;
}

double mat_trace(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

double mat_max_abs(const Mat3& a)
{
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j]));
    return m;
}

double det3(const Mat3& a)
{
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
           - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 mat_exp(const Mat3& a)
{
    // Scale so the squared Taylor series converges fast, then square back.
    double norm = mat_max_abs(a);
    int s = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        s += 1;
    }
    Mat3 b = mat_scale(std::ldexp(1.0, -s), a);
    Mat3 sum = mat_identity();
    Mat3 term = mat_identity();
    for (int k = 1; k <= 18; ++k) {
        term = mat_scale(1.0 / k, mat_mul(term, b));
        sum = mat_add(sum, term);
    }
    for (int i = 0; i < s; ++i) sum = mat_mul(sum, sum);
    return sum;
}

FlowQuantities flow_quantities(const Mat3& M)
{
    FlowQuantities q;
    q.M = M;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
            q.cof[i][k] = M[i1][k1] * M[i2][k2] - M[i1][k2] * M[i2][k1];
        }
    q.J = M[0][0] * q.cof[0][0] + M[0][1] * q.cof[0][1] + M[0][2] * q.cof[0][2];
    if (std::abs(q.J) <= 1e-300)
        throw std::domain_error("flow gradient is singular");
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) q.A[k][i] = q.cof[i][k] / q.J;
    return q;
}

ManufacturedFlow linear_flow(std::function<Mat3(double)> Q,
                             std::function<Mat3(double)> Qd,
                             std::function<Mat3(double)> Qdd)
{
    ManufacturedFlow f;
    f.zeta = [Q](double tau, const Vec3& x) { return mat_apply(Q(tau), x); };
    f.nu = [Qd](double tau, const Vec3& x) { return mat_apply(Qd(tau), x); };
    f.grad = [Q](double tau, const Vec3&) { return Q(tau); };
    f.grad_rate = [Qd](double tau, const Vec3&) { return Qd(tau); };
    f.grad_rate2 = [Qdd](double tau, const Vec3&) { return Qdd(tau); };
    return f;
}

ManufacturedFlow exp_flow(const Mat3& B)
{
    auto Q = [B](double tau) { return mat_exp(mat_scale(tau, B)); };
    auto Qd = [B, Q](double tau) { return mat_mul(B, Q(tau)); };
    auto Qdd = [B, Q](double tau) { return mat_mul(B, mat_mul(B, Q(tau))); };
    return linear_flow(Q, Qd, Qdd);
}

ManufacturedFlow damped_matrix_flow(const Mat3& B)
{
    auto Q = [B](double tau) {
        return mat_add(mat_identity(), mat_scale(1.0 - std::exp(-tau), B));
    };
    auto Qd = [B](double tau) { return mat_scale(std::exp(-tau), B); };
    auto Qdd = [B](double tau) { return mat_scale(-std::exp(-tau), B); };
    return linear_flow(Q, Qd, Qdd);
}

ManufacturedFlow scaling_flow(std::function<double(double)> lambda,
                              std::function<double(double)> lambda_d,
                              std::function<double(double)> lambda_dd)
{
    auto Q = [lambda](double tau) { return mat_scale(lambda(tau), mat_identity()); };
    auto Qd = [lambda_d](double tau) {
        return mat_scale(lambda_d(tau), mat_identity());
    };
    auto Qdd = [lambda_dd](double tau) {
        return mat_scale(lambda_dd(tau), mat_identity());
    };
    return linear_flow(Q, Qd, Qdd);
}

Mat3 radial_field_gradient(double f_over_r, double f_prime, const Vec3& x)
{
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r2 <= 0.0) throw std::domain_error("radial gradient needs r > 0");
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double p = x[i] * x[j] / r2;
            m[i][j] = f_prime * p + f_over_r * ((i == j ? 1.0 : 0.0) - p);
        }
    return m;
}

ManufacturedFlow radial_flow(const RadialMotion& m)
{
    ManufacturedFlow f;
    auto r_of = [](const Vec3& x) {
        return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    f.zeta = [m, r_of](double tau, const Vec3& x) {
        double r = r_of(x);
        double s = m.phi(tau, r) / r;
        return Vec3{s * x[0], s * x[1], s * x[2]};
    };
    f.nu = [m, r_of](double tau, const Vec3& x) {
        double r = r_of(x);
        double s = m.phi_tau(tau, r) / r;
        return Vec3{s * x[0], s * x[1], s * x[2]};
    };
    f.grad = [m, r_of](double tau, const Vec3& x) {
        double r = r_of(x);
        return radial_field_gradient(m.phi(tau, r) / r, m.phi_r(tau, r), x);
    };
    f.grad_rate = [m, r_of](double tau, const Vec3& x) {
        double r = r_of(x);
        return radial_field_gradient(m.phi_tau(tau, r) / r, m.phi_tau_r(tau, r), x);
    };
    f.grad_rate2 = [m, r_of](double tau, const Vec3& x) {
        double r = r_of(x);
        return radial_field_gradient(m.phi_tautau(tau, r) / r,
                                     m.phi_tautau_r(tau, r), x);
    };
    return f;
}

double piola_residual(const ManufacturedFlow& f, double tau, const Vec3& x,
                      double h)
{
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        double div = 0.0;
        for (int k = 0; k < 3; ++k) {
            Vec3 xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            double cp = flow_quantities(f.grad(tau, xp)).cof[i][k];
            double cm = flow_quantities(f.grad(tau, xm)).cof[i][k];
            div += (cp - cm) / (2.0 * h);
        }
        worst = std::max(worst, std::abs(div));
    }
    return worst;
}

Mat3 curl_in_flow(const Mat3& G, const Mat3& A)
{
    Mat3 ga = mat_mul(G, A);
    return mat_sub(ga, mat_transpose(ga));
}

double curl_transport_residual(const ManufacturedFlow& f, double tau,
                               const Vec3& x, double dtau)
{
    auto curl_nu = [&](double t) {
        FlowQuantities q = flow_quantities(f.grad(t, x));
        return curl_in_flow(f.grad_rate(t, x), q.A);
    };
    Mat3 lhs = mat_scale(1.0 / (2.0 * dtau),
                         mat_sub(curl_nu(tau + dtau), curl_nu(tau - dtau)));

    FlowQuantities q = flow_quantities(f.grad(tau, x));
    Mat3 G = f.grad_rate(tau, x);
    Mat3 Adot = mat_scale(-1.0, mat_mul(q.A, mat_mul(G, q.A)));
    Mat3 forcing = curl_in_flow(mat_add(f.grad_rate2(tau, x), G), q.A);
    Mat3 ga = mat_mul(G, Adot);
    Mat3 rhs = mat_add(mat_sub(forcing, curl_in_flow(G, q.A)),
                       mat_sub(ga, mat_transpose(ga)));
    return mat_max_abs(mat_sub(lhs, rhs));
}

double jacobian_rate_residual(const ManufacturedFlow& f, double tau,
                              const Vec3& x, double dtau)
{
    double jp = flow_quantities(f.grad(tau + dtau, x)).J;
    double jm = flow_quantities(f.grad(tau - dtau, x)).J;
    FlowQuantities q = flow_quantities(f.grad(tau, x));
    double rate = mat_trace(mat_mul(f.grad_rate(tau, x), q.A));
    return std::abs((jp - jm) / (2.0 * dtau) - q.J * rate);
}

double inverse_rate_residual(const ManufacturedFlow& f, double tau,
                             const Vec3& x, double dtau)
{
    Mat3 ap = flow_quantities(f.grad(tau + dtau, x)).A;
    Mat3 am = flow_quantities(f.grad(tau - dtau, x)).A;
    Mat3 fd = mat_scale(1.0 / (2.0 * dtau), mat_sub(ap, am));
    FlowQuantities q = flow_quantities(f.grad(tau, x));
    Mat3 rate = mat_scale(-1.0, mat_mul(q.A, mat_mul(f.grad_rate(tau, x), q.A)));
    return mat_max_abs(mat_sub(fd, rate));
}

double to_rescaled_time(double t)
{
    if (t <= -1.0) throw std::domain_error("physical time must exceed -1");
    return std::log1p(t);
}

double to_physical_time(double tau) { return std::expm1(tau); }

Vec3 rescaled_velocity(const Vec3& eta, const Vec3& v, double t)
{
    double s = 1.0 / (1.0 + t);
    return Vec3{v[0] - s * eta[0], v[1] - s * eta[1], v[2] - s * eta[2]};
}

double lagrangian_density(double w_pow_alpha, double J)
{
    if (J <= 0.0) throw std::domain_error("flow map is orientation reversing");
    return w_pow_alpha / J;
}

} // namespace vfb
