#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "vfb/poly.hpp"

namespace vfb {

// Primitive first-order operators on the unit ball:
//   Euler  : r d/dr = x_i d_i              (scaling derivative)
//   Rot_ij : x_i d_j - x_j d_i, i<j        (rotation generators)
//   D_i    : d/dx_i                        (rectangular derivatives)
enum class Atom : int { Euler, Rot12, Rot13, Rot23, D1, D2, D3 };

Poly apply_atom(Atom a, const Poly& f);

// Composition of atoms, applied right to left (atoms.front() is outermost).
struct OperatorWord {
    std::vector<Atom> atoms;
};

Poly apply(const OperatorWord& w, const Poly& f);

// a(b f) - b(a f).
Poly commutator_apply(const OperatorWord& a, const OperatorWord& b, const Poly& f);

// Normal-form scaling/rotation word Euler^m Rot12^n1 Rot13^n2 Rot23^n3.
struct SRWord {
    int m = 0;
    std::array<int, 3> n{0, 0, 0};

    int rot_order() const { return n[0] + n[1] + n[2]; }
    int order() const { return m + rot_order(); }
    OperatorWord as_operator() const;
    friend bool operator<(const SRWord& a, const SRWord& b)
    {
        return std::tie(a.m, a.n) < std::tie(b.m, b.n);
    }
    friend bool operator==(const SRWord& a, const SRWord& b)
    {
        return a.m == b.m && a.n == b.n;
    }
};

// Rational function poly / r^{2k}; closed under Euler, Rot and D atoms.
// These are exactly the coefficient functions produced by rewriting
// rectangular derivatives in the scaling/rotation frame (smooth away from
// the origin).
struct RadialRational {
    Poly num;
    int k = 0;

    bool is_zero() const { return num.is_zero(); }
    void reduce(); // divide num by r^2 while exactly possible
    RadialRational& operator+=(const RadialRational& o);
    RadialRational operator*(const RadialRational& o) const;
    RadialRational scaled(const Rat& c) const;
    double eval(const std::array<double, 3>& x) const;
    Rat eval_exact(const std::array<Rat, 3>& x) const;
};

// Operator expressed in the normal-form basis with function coefficients:
// sum over words of coeff(x) * (word applied to the argument).
using WordExpansion = std::map<SRWord, RadialRational>;

// Adds c * w, dropping exact zeros.
void add_term(WordExpansion& e, const SRWord& w, const RadialRational& c);

// Radial-tangential splitting of a rectangular derivative:
//   D_s = sum_j (x_j/r^2) Rot_{js} + (x_s/r^2) Euler,  s in {0,1,2}.
WordExpansion partial_decomposition(int s);

// Left-composition a o E in the normal-form basis (Leibniz on the
// coefficients plus normal ordering of the atom into each word).
WordExpansion left_compose(Atom a, const WordExpansion& e);

// Constructive expansion of the commutator [Euler^m Rot^n, D_s] as
// sum coeff(x) * Euler^a Rot^b with 1 <= a+|b| <= m+|n|, a <= m+1
// (a <= m when |n| = 0). Built by sequentially exchanging D_s through the
// word using the primitive commutators and the splitting above.
WordExpansion word_partial_commutator(const SRWord& w, int s);

// Largest Euler exponent present (structure check helper). -1 if empty.
int max_euler_exponent(const WordExpansion& e);
// Largest total order a+|b| present. -1 if empty.
int max_order(const WordExpansion& e);
// Smallest total order present. -1 if empty.
int min_order(const WordExpansion& e);

double eval_expansion(const WordExpansion& e, const Poly& f,
                      const std::array<double, 3>& x);
Rat eval_expansion_exact(const WordExpansion& e, const Poly& f,
                         const std::array<Rat, 3>& x);

// Scaling/rotation word written in rectangular derivatives:
// Euler^m Rot^n = sum_{|k|<=m+|n|} Q_k(x) D^k with polynomial Q_k
// (smooth across the origin).
using PartialIdx = std::array<int, 3>;
std::map<PartialIdx, Poly> word_to_partials(const SRWord& w);

// Rectangular derivative written in scaling/rotation words:
// D^k = sum coeff(x) * Euler^a Rot^b, coefficients smooth away from 0.
WordExpansion partials_to_words(const PartialIdx& k);

double eval_partials(const std::map<PartialIdx, Poly>& e, const Poly& f,
                     const std::array<double, 3>& x);

// |D_i f - sum_j (x_j/r^2) Rot_{ji} f - (x_i/r^2) Euler f| at x.
double rect_decomposition_residual(int axis, const Poly& f,
                                   const std::array<double, 3>& x);

// Deterministic sample points in the annulus rmin <= |x| <= rmax.
std::vector<std::array<double, 3>> annulus_samples(int count, double rmin,
                                                   double rmax, std::uint32_t seed);

// Fixed rational sample points with 0.4 <= |x| <= 0.95 for exact checks.
const std::vector<std::array<Rat, 3>>& rational_annulus_points();

// Full identity suite (primitive commutators exactly on the monomial basis,
// constructive expansions with exact-rational residuals, rectangular
// reconstructions). Prints one line per check; returns false on any failure.
bool run_identity_suite(std::ostream& os, int max_degree = 6);

} // namespace vfb
