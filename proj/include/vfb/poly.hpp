#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace vfb {

// Exact rational scalar for the symbolic derivative calculus.
using Rat = boost::multiprecision::cpp_rational;

// Monomial exponent triple x1^e0 x2^e1 x3^e2.
struct Mono {
    std::array<int, 3> e{0, 0, 0};
    friend bool operator<(const Mono& a, const Mono& b) { return a.e < b.e; }
    friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }
    int degree() const { return e[0] + e[1] + e[2]; }
};

// Polynomial in (x1,x2,x3) with exact rational coefficients, stored in
// canonical form: no explicit zero coefficients are kept.
class Poly {
public:
    Poly() = default;
    static Poly constant(const Rat& c);
    static Poly variable(int axis);          // x_{axis}, axis in {0,1,2}
    static Poly monomial(const Mono& m, const Rat& c);
    // r^2 = x1^2 + x2^2 + x3^2
    static Poly r_squared();

    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    const std::map<Mono, Rat>& terms() const { return terms_; }

    void add_term(const Mono& m, const Rat& c); // accumulates, drops zeros

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    Poly scaled(const Rat& c) const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Poly diff(int axis) const;               // d/dx_{axis}
    Poly mul_var(int axis) const;            // x_{axis} * this

    // Exact division by r^2; nullopt when not divisible.
    std::optional<Poly> divide_r2() const;

    Rat eval_exact(const std::array<Rat, 3>& x) const;
    double eval(const std::array<double, 3>& x) const;

    std::string str() const;

private:
    std::map<Mono, Rat> terms_;
};

// All trivariate monomials of total degree <= max_degree, in graded
// lexicographic order. For max_degree = 6 there are 84 of them.
std::vector<Poly> monomial_basis(int max_degree);

} // namespace vfb
