#pragma once

#include <array>
#include <functional>

namespace vfb {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat_identity();
Mat3 mat_add(const Mat3& a, const Mat3& b);
Mat3 mat_sub(const Mat3& a, const Mat3& b);
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Mat3 mat_scale(double c, const Mat3& a);
Mat3 mat_transpose(const Mat3& a);
Vec3 mat_apply(const Mat3& a, const Vec3& x);
double mat_trace(const Mat3& a);
double mat_max_abs(const Mat3& a);
double det3(const Mat3& a);
// Matrix exponential by scaling-and-squaring on the Taylor series.
Mat3 mat_exp(const Mat3& a);

// Deformation data at one point: gradient M = D zeta (row = component,
// column = derivative), cofactor matrix cof with cof[i][k] = d J / d M[i][k],
// inverse A = M^{-1} and determinant J. J A^k_i = cof[i][k].
struct FlowQuantities {
    Mat3 M;
    Mat3 cof;
    Mat3 A;
    double J = 0.0;
};

// Throws std::domain_error when the gradient is not invertible
// (|det| <= 1e-300).
FlowQuantities flow_quantities(const Mat3& M);

// Manufactured flow map zeta(tau, x) with analytic time derivatives:
// nu = d zeta / d tau, grad = D zeta, grad_rate = D nu, grad_rate2 = D nu_tau.
struct ManufacturedFlow {
    std::function<Vec3(double, const Vec3&)> zeta;
    std::function<Vec3(double, const Vec3&)> nu;
    std::function<Mat3(double, const Vec3&)> grad;
    std::function<Mat3(double, const Vec3&)> grad_rate;
    std::function<Mat3(double, const Vec3&)> grad_rate2;
};

// zeta = Q(tau) x for a matrix path Q with derivatives Qd, Qdd.
ManufacturedFlow linear_flow(std::function<Mat3(double)> Q,
                             std::function<Mat3(double)> Qd,
                             std::function<Mat3(double)> Qdd);

// zeta = exp(tau B) x.
ManufacturedFlow exp_flow(const Mat3& B);

// zeta = (I + (1 - e^{-tau}) B) x: starts at the identity with velocity Bx
// and relaxes; stays invertible for small enough B.
ManufacturedFlow damped_matrix_flow(const Mat3& B);

// zeta = lambda(tau) x.
ManufacturedFlow scaling_flow(std::function<double(double)> lambda,
                              std::function<double(double)> lambda_d,
                              std::function<double(double)> lambda_dd);

// Spherically symmetric flow zeta = phi(tau, r) x / r. The six scalar
// callables are phi and its r / tau / mixed derivatives.
struct RadialMotion {
    std::function<double(double, double)> phi;
    std::function<double(double, double)> phi_r;
    std::function<double(double, double)> phi_tau;
    std::function<double(double, double)> phi_tau_r;
    std::function<double(double, double)> phi_tautau;
    std::function<double(double, double)> phi_tautau_r;
};

// Gradient of a radial field f(r) x/r: f' P + (f/r) (I - P), P = xx^T/r^2.
Mat3 radial_field_gradient(double f_over_r, double f_prime, const Vec3& x);

ManufacturedFlow radial_flow(const RadialMotion& m);

// Row divergence of the cofactor matrix, sum_k d_k cof[i][k], by centered
// differences with spacing h; identically zero in exact arithmetic.
// Returns the largest component magnitude.
double piola_residual(const ManufacturedFlow& f, double tau, const Vec3& x,
                      double h);

// Antisymmetric part of G A (flow-coordinate curl of the field with
// rectangular gradient G).
Mat3 curl_in_flow(const Mat3& G, const Mat3& A);

// Transport identity for the flow-coordinate curl of the velocity:
//   d/dtau [curl nu] = curl(nu_tau + nu) - curl(nu) + G Adot - (G Adot)^T,
// G = D nu, Adot = -A (D nu) A. Pure algebra, so it holds for any flow.
// Left side by centered differences with step dtau, right side analytic;
// returns the largest entry of the difference (O(dtau^2)).
double curl_transport_residual(const ManufacturedFlow& f, double tau,
                               const Vec3& x, double dtau);

// |dJ/dtau - J tr((D nu) A)| with the rate by centered differences.
double jacobian_rate_residual(const ManufacturedFlow& f, double tau,
                              const Vec3& x, double dtau);

// max |dA/dtau + A (D nu) A| with the rate by centered differences.
double inverse_rate_residual(const ManufacturedFlow& f, double tau,
                             const Vec3& x, double dtau);

// Self-similar time change tau = log(1 + t) and the matching velocity split
// v = eta/(1+t) + nu.
double to_rescaled_time(double t);
double to_physical_time(double tau);
// nu = v - eta / (1+t) evaluated componentwise.
Vec3 rescaled_velocity(const Vec3& eta, const Vec3& v, double t);

// Density transported by the flow from initial profile w^alpha: w^alpha / J.
// Throws std::domain_error when J <= 0.
double lagrangian_density(double w_pow_alpha, double J);

} // namespace vfb
