#include "vfb/operators.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace vfb {

namespace {

// Rotation atom for the ordered axis pair (i,j), i<j, as an index 0..2.
int rot_index(int i, int j)
{
    if (i == 0 && j == 1) return 0;
    if (i == 0 && j == 2) return 1;
    return 2; // (1,2)
}

Atom rot_atom(int idx)
{
    switch (idx) {
    case 0: return Atom::Rot12;
    case 1: return Atom::Rot13;
    default: return Atom::Rot23;
    }
}

// Axis pair of a rotation index.
std::pair<int, int> rot_axes(int idx)
{
    switch (idx) {
    case 0: return {0, 1};
    case 1: return {0, 2};
    default: return {1, 2};
    }
}

// [R_p, R_q] for rotation indices p > q: returns {sign, index}.
//   [R13,R12] = +R23, [R23,R12] = -R13, [R23,R13] = +R12.
std::pair<int, int> rot_commutator(int p, int q)
{
    if (p == 1 && q == 0) return {+1, 2};
    if (p == 2 && q == 0) return {-1, 1};
    return {+1, 0}; // p == 2, q == 1
}

// Normal ordering of a product of rotation atoms (outermost first) into
// ascending words, by adjacent exchanges: R_p R_q = R_q R_p + [R_p, R_q].
// Terminates because an exchange removes one inversion and the commutator
// branch shortens the word.
void normalize_rot_seq(const std::vector<int>& seq, const Rat& c,
                       std::map<std::array<int, 3>, Rat>& out)
{
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] > seq[i + 1]) {
            std::vector<int> swapped = seq;
            std::swap(swapped[i], swapped[i + 1]);
            normalize_rot_seq(swapped, c, out);

            auto [sign, r] = rot_commutator(seq[i], seq[i + 1]);
            std::vector<int> contracted;
            contracted.reserve(seq.size() - 1);
            contracted.insert(contracted.end(), seq.begin(), seq.begin() + i);
            contracted.push_back(r);
            contracted.insert(contracted.end(), seq.begin() + i + 2, seq.end());
            normalize_rot_seq(contracted, c * sign, out);
            return;
        }
    }
    std::array<int, 3> counts{0, 0, 0};
    for (int a : seq) counts[a] += 1;
    Rat& slot = out[counts];
    slot += c;
    if (slot == 0) out.erase(counts);
}

// Rot_idx composed in front of the rotation part of w (Euler part rides
// along since Euler commutes with rotations). Coefficients are constants.
std::map<SRWord, Rat> prepend_rot(int idx, const SRWord& w)
{
    std::vector<int> seq;
    seq.push_back(idx);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < w.n[r]; ++c) seq.push_back(r);

    std::map<std::array<int, 3>, Rat> rot_part;
    normalize_rot_seq(seq, Rat(1), rot_part);

    std::map<SRWord, Rat> out;
    for (const auto& [counts, c] : rot_part) out[SRWord{w.m, counts}] = c;
    return out;
}

RadialRational rr_const(const Rat& c) { return RadialRational{Poly::constant(c), 0}; }

// +/- x_axis / r^2.
RadialRational rr_axis_over_r2(int axis, int sign)
{
    return RadialRational{Poly::variable(axis).scaled(Rat(sign)), 1};
}

RadialRational apply_atom_rr(Atom a, const RadialRational& c)
{
    RadialRational out;
    switch (a) {
    case Atom::Euler:
        // Euler(p / r^{2k}) = (Euler p - 2k p) / r^{2k}.
        out.num = apply_atom(Atom::Euler, c.num) - c.num.scaled(Rat(2 * c.k));
        out.k = c.k;
        break;
    case Atom::Rot12:
    case Atom::Rot13:
    case Atom::Rot23:
        // Rotations annihilate r^2, so they act on the numerator only.
        out.num = apply_atom(a, c.num);
        out.k = c.k;
        break;
    default: {
        int s = static_cast<int>(a) - static_cast<int>(Atom::D1);
        // d_s(p / r^{2k}) = ((d_s p) r^2 - 2k x_s p) / r^{2(k+1)}.
        out.num = c.num.diff(s) * Poly::r_squared()
                  - c.num.mul_var(s).scaled(Rat(2 * c.k));
        out.k = c.k + 1;
        break;
    }
    }
    out.reduce();
    return out;
}

std::string word_str(const SRWord& w)
{
    std::string s = "E^" + std::to_string(w.m) + " R12^" + std::to_string(w.n[0])
                    + " R13^" + std::to_string(w.n[1]) + " R23^"
                    + std::to_string(w.n[2]);
    return s;
}

} // namespace

Poly apply_atom(Atom a, const Poly& f)
{
    switch (a) {
    case Atom::Euler: {
        Poly out;
        for (int i = 0; i < 3; ++i) out += f.diff(i).mul_var(i);
        return out;
    }
    case Atom::Rot12: return f.diff(1).mul_var(0) - f.diff(0).mul_var(1);
    case Atom::Rot13: return f.diff(2).mul_var(0) - f.diff(0).mul_var(2);
    case Atom::Rot23: return f.diff(2).mul_var(1) - f.diff(1).mul_var(2);
    case Atom::D1: return f.diff(0);
    case Atom::D2: return f.diff(1);
    default: return f.diff(2);
    }
}

Poly apply(const OperatorWord& w, const Poly& f)
{
    Poly out = f;
    for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it)
        out = apply_atom(*it, out);
    return out;
}

Poly commutator_apply(const OperatorWord& a, const OperatorWord& b, const Poly& f)
{
    return apply(a, apply(b, f)) - apply(b, apply(a, f));
}

OperatorWord SRWord::as_operator() const
{
    OperatorWord w;
    for (int i = 0; i < m; ++i) w.atoms.push_back(Atom::Euler);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < n[r]; ++c) w.atoms.push_back(rot_atom(r));
    return w;
}

void RadialRational::reduce()
{
    if (num.is_zero()) {
        k = 0;
        return;
    }
    while (k > 0) {
        auto q = num.divide_r2();
        if (!q) break;
        num = *q;
        k -= 1;
    }
}

RadialRational& RadialRational::operator+=(const RadialRational& o)
{
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    int kk = std::max(k, o.k);
    Poly a = num;
    for (int i = k; i < kk; ++i) a = a * Poly::r_squared();
    Poly b = o.num;
    for (int i = o.k; i < kk; ++i) b = b * Poly::r_squared();
    num = a + b;
    k = kk;
    reduce();
    return *this;
}

RadialRational RadialRational::operator*(const RadialRational& o) const
{
    RadialRational out{num * o.num, k + o.k};
    out.reduce();
    return out;
}

RadialRational RadialRational::scaled(const Rat& c) const
{
    if (c == 0) return RadialRational{};
    return RadialRational{num.scaled(c), k};
}

double RadialRational::eval(const std::array<double, 3>& x) const
{
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return num.eval(x) / std::pow(r2, k);
}

Rat RadialRational::eval_exact(const std::array<Rat, 3>& x) const
{
    Rat r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    Rat den = 1;
    for (int i = 0; i < k; ++i) den *= r2;
    return num.eval_exact(x) / den;
}

void add_term(WordExpansion& e, const SRWord& w, const RadialRational& c)
{
    if (c.is_zero()) return;
    auto it = e.find(w);
    if (it == e.end()) {
        e.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
}

WordExpansion partial_decomposition(int s)
{
    if (s < 0 || s > 2) throw std::invalid_argument("axis out of range");
    WordExpansion e;
    // D_s = sum_{j != s} (x_j / r^2) Rot_{js} + (x_s / r^2) Euler, where
    // Rot_{js} = x_j d_s - x_s d_j carries a sign relative to the i<j atom.
    for (int j = 0; j < 3; ++j) {
        if (j == s) continue;
        int sign = (j < s) ? +1 : -1;
        int idx = (j < s) ? rot_index(j, s) : rot_index(s, j);
        SRWord w;
        w.n[idx] = 1;
        add_term(e, w, rr_axis_over_r2(j, sign));
    }
    SRWord eu;
    eu.m = 1;
    add_term(e, eu, rr_axis_over_r2(s, +1));
    return e;
}

WordExpansion left_compose(Atom a, const WordExpansion& e)
{
    WordExpansion out;
    for (const auto& [w, c] : e) {
        // Leibniz: the atom differentiates the coefficient...
        add_term(out, w, apply_atom_rr(a, c));
        // ...and composes into the word.
        switch (a) {
        case Atom::Euler: {
            SRWord up = w;
            up.m += 1;
            add_term(out, up, c);
            break;
        }
        case Atom::Rot12:
        case Atom::Rot13:
        case Atom::Rot23: {
            int idx = static_cast<int>(a) - static_cast<int>(Atom::Rot12);
            for (const auto& [wq, q] : prepend_rot(idx, w))
                add_term(out, wq, c.scaled(q));
            break;
        }
        default: {
            int s = static_cast<int>(a) - static_cast<int>(Atom::D1);
            for (int j = 0; j < 3; ++j) {
                if (j == s) continue;
                int sign = (j < s) ? +1 : -1;
                int idx = (j < s) ? rot_index(j, s) : rot_index(s, j);
                RadialRational cj = c * rr_axis_over_r2(j, sign);
                for (const auto& [wq, q] : prepend_rot(idx, w))
                    add_term(out, wq, cj.scaled(q));
            }
            SRWord up = w;
            up.m += 1;
            add_term(out, up, c * rr_axis_over_r2(s, +1));
            break;
        }
        }
    }
    return out;
}

WordExpansion word_partial_commutator(const SRWord& w, int s)
{
    // w o D_s: split D_s, then stack the word's atoms from the inside out.
    WordExpansion e1 = partial_decomposition(s);
    OperatorWord ow = w.as_operator();
    for (auto it = ow.atoms.rbegin(); it != ow.atoms.rend(); ++it)
        e1 = left_compose(*it, e1);

    // D_s o w.
    WordExpansion e2;
    add_term(e2, w, rr_const(Rat(1)));
    e2 = left_compose(static_cast<Atom>(static_cast<int>(Atom::D1) + s), e2);

    for (const auto& [wq, c] : e2) add_term(e1, wq, c.scaled(Rat(-1)));
    return e1;
}

int max_euler_exponent(const WordExpansion& e)
{
    int m = -1;
    for (const auto& [w, c] : e) m = std::max(m, w.m);
    return m;
}

int max_order(const WordExpansion& e)
{
    int m = -1;
    for (const auto& [w, c] : e) m = std::max(m, w.order());
    return m;
}

int min_order(const WordExpansion& e)
{
    int m = -1;
    for (const auto& [w, c] : e)
        m = (m < 0) ? w.order() : std::min(m, w.order());
    return m;
}

double eval_expansion(const WordExpansion& e, const Poly& f,
                      const std::array<double, 3>& x)
{
    double out = 0.0;
    for (const auto& [w, c] : e)
        out += c.eval(x) * apply(w.as_operator(), f).eval(x);
    return out;
}

Rat eval_expansion_exact(const WordExpansion& e, const Poly& f,
                         const std::array<Rat, 3>& x)
{
    Rat out = 0;
    for (const auto& [w, c] : e)
        out += c.eval_exact(x) * apply(w.as_operator(), f).eval_exact(x);
    return out;
}

std::map<PartialIdx, Poly> word_to_partials(const SRWord& w)
{
    std::map<PartialIdx, Poly> e;
    e[{0, 0, 0}] = Poly::constant(Rat(1));

    auto push = [](std::map<PartialIdx, Poly>& out, const PartialIdx& k,
                   const Poly& q) {
        if (q.is_zero()) return;
        auto it = out.find(k);
        if (it == out.end()) {
            out.emplace(k, q);
            return;
        }
        it->second += q;
        if (it->second.is_zero()) out.erase(it);
    };

    OperatorWord ow = w.as_operator();
    for (auto it = ow.atoms.rbegin(); it != ow.atoms.rend(); ++it) {
        Atom a = *it;
        std::map<PartialIdx, Poly> next;
        for (const auto& [k, q] : e) {
            switch (a) {
            case Atom::Euler: {
                push(next, k, apply_atom(Atom::Euler, q));
                for (int i = 0; i < 3; ++i) {
                    PartialIdx ki = k;
                    ki[i] += 1;
                    push(next, ki, q.mul_var(i));
                }
                break;
            }
            case Atom::Rot12:
            case Atom::Rot13:
            case Atom::Rot23: {
                int idx = static_cast<int>(a) - static_cast<int>(Atom::Rot12);
                auto [i, j] = rot_axes(idx);
                push(next, k, apply_atom(a, q));
                PartialIdx kj = k;
                kj[j] += 1;
                push(next, kj, q.mul_var(i));
                PartialIdx ki = k;
                ki[i] += 1;
                push(next, ki, q.mul_var(j).scaled(Rat(-1)));
                break;
            }
            default: {
                int s = static_cast<int>(a) - static_cast<int>(Atom::D1);
                push(next, k, q.diff(s));
                PartialIdx ks = k;
                ks[s] += 1;
                push(next, ks, q);
                break;
            }
            }
        }
        e = std::move(next);
    }
    return e;
}

WordExpansion partials_to_words(const PartialIdx& k)
{
    WordExpansion e;
    add_term(e, SRWord{}, rr_const(Rat(1)));
    // D^k = D1^{k1} D2^{k2} D3^{k3}; compose innermost (D3 block) first.
    for (int axis = 2; axis >= 0; --axis)
        for (int c = 0; c < k[axis]; ++c)
            e = left_compose(static_cast<Atom>(static_cast<int>(Atom::D1) + axis), e);
    return e;
}

double eval_partials(const std::map<PartialIdx, Poly>& e, const Poly& f,
                     const std::array<double, 3>& x)
{
    double out = 0.0;
    for (const auto& [k, q] : e) {
        Poly df = f;
        for (int axis = 0; axis < 3; ++axis)
            for (int c = 0; c < k[axis]; ++c) df = df.diff(axis);
        out += q.eval(x) * df.eval(x);
    }
    return out;
}

double rect_decomposition_residual(int axis, const Poly& f,
                                   const std::array<double, 3>& x)
{
    WordExpansion e = partial_decomposition(axis);
    return std::abs(f.diff(axis).eval(x) - eval_expansion(e, f, x));
}

std::vector<std::array<double, 3>> annulus_samples(int count, double rmin,
                                                   double rmax, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> rad(rmin, rmax);
    std::vector<std::array<double, 3>> pts;
    pts.reserve(count);
    while (static_cast<int>(pts.size()) < count) {
        std::array<double, 3> d{gauss(rng), gauss(rng), gauss(rng)};
        double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (n < 1e-8) continue;
        double r = rad(rng);
        pts.push_back({d[0] / n * r, d[1] / n * r, d[2] / n * r});
    }
    return pts;
}

const std::vector<std::array<Rat, 3>>& rational_annulus_points()
{
    static const std::vector<std::array<Rat, 3>> pts = {
        {Rat(1, 2), Rat(1, 3), Rat(2, 5)},
        {Rat(3, 5), Rat(1, 7), Rat(1, 4)},
        {Rat(2, 3), Rat(1, 2), Rat(1, 5)},
        {Rat(1, 4), Rat(2, 5), Rat(1, 3)},
        {Rat(1, 2), Rat(1, 2), Rat(1, 2)},
        {Rat(5, 7), Rat(1, 3), Rat(1, 6)},
        {Rat(3, 5), Rat(0), Rat(1, 2)},
    };
    return pts;
}

namespace {

bool report(std::ostream& os, const std::string& name, bool pass,
            const std::string& detail = "")
{
    os << (pass ? "ok   " : "FAIL ") << name;
    if (!detail.empty()) os << " (" << detail << ")";
    os << "\n";
    return pass;
}

} // namespace

bool run_identity_suite(std::ostream& os, int max_degree)
{
    bool all = true;
    const std::vector<Poly> basis_small = monomial_basis(4);
    const std::vector<Poly> basis_full = monomial_basis(max_degree);
    const auto& rpts = rational_annulus_points();

    // Rotation algebra: [R12,R13] = -R23, [R12,R23] = +R13, [R13,R23] = -R12.
    {
        struct Case {
            Atom a, b, c;
            int sign;
        };
        const Case cases[] = {
            {Atom::Rot12, Atom::Rot13, Atom::Rot23, -1},
            {Atom::Rot12, Atom::Rot23, Atom::Rot13, +1},
            {Atom::Rot13, Atom::Rot23, Atom::Rot12, -1},
        };
        bool ok = true;
        for (const auto& cs : cases)
            for (const Poly& f : basis_small) {
                Poly lhs = commutator_apply({{cs.a}}, {{cs.b}}, f);
                Poly rhs = apply_atom(cs.c, f).scaled(Rat(cs.sign));
                if (!(lhs - rhs).is_zero()) ok = false;
            }
        all &= report(os, "rotation-commutators", ok, "exact on monomials, degree <= 4");
    }

    // [D_s, Rot_jl] = delta_sj D_l - delta_sl D_j.
    {
        bool ok = true;
        for (int s = 0; s < 3; ++s)
            for (int idx = 0; idx < 3; ++idx) {
                auto [j, l] = rot_axes(idx);
                Atom ds = static_cast<Atom>(static_cast<int>(Atom::D1) + s);
                for (const Poly& f : basis_small) {
                    Poly lhs = commutator_apply({{ds}}, {{rot_atom(idx)}}, f);
                    Poly rhs;
                    if (s == j) rhs += f.diff(l);
                    if (s == l) rhs -= f.diff(j);
                    if (!(lhs - rhs).is_zero()) ok = false;
                }
            }
        all &= report(os, "partial-rotation-commutators", ok,
                      "exact on monomials, degree <= 4");
    }

    // [Euler, D_s] = -D_s and [Euler, Rot] = 0.
    {
        bool ok = true;
        for (int s = 0; s < 3; ++s) {
            Atom ds = static_cast<Atom>(static_cast<int>(Atom::D1) + s);
            for (const Poly& f : basis_small) {
                Poly lhs = commutator_apply({{Atom::Euler}}, {{ds}}, f);
                if (!(lhs + f.diff(s)).is_zero()) ok = false;
            }
        }
        for (int idx = 0; idx < 3; ++idx)
            for (const Poly& f : basis_small)
                if (!commutator_apply({{Atom::Euler}}, {{rot_atom(idx)}}, f).is_zero())
                    ok = false;
        all &= report(os, "euler-commutators", ok, "exact on monomials, degree <= 4");
    }

    // Radial-tangential splitting of each rectangular derivative.
    {
        bool ok = true;
        for (int s = 0; s < 3; ++s) {
            WordExpansion e = partial_decomposition(s);
            for (const Poly& f : basis_full)
                for (const auto& x : rpts) {
                    Rat lhs = f.diff(s).eval_exact(x);
                    if (lhs != eval_expansion_exact(e, f, x)) ok = false;
                }
        }
        all &= report(os, "derivative-splitting", ok,
                      "exact at rational points, degree <= "
                          + std::to_string(max_degree));
    }

    // Commutators of normal-form words with rectangular derivatives:
    // exact agreement plus the structural bounds on the expansion.
    {
        bool ok = true;
        std::string why;
        std::vector<SRWord> words;
        for (int m = 0; m <= 3; ++m)
            for (int n0 = 0; n0 + m <= 3; ++n0)
                for (int n1 = 0; n1 + n0 + m <= 3; ++n1)
                    for (int n2 = 0; n2 + n1 + n0 + m <= 3; ++n2) {
                        SRWord w{m, {n0, n1, n2}};
                        if (w.order() >= 1) words.push_back(w);
                    }
        words.push_back(SRWord{2, {1, 1, 0}});
        words.push_back(SRWord{1, {0, 2, 1}});

        const std::vector<Poly> probe = monomial_basis(3);
        for (const SRWord& w : words)
            for (int s = 0; s < 3; ++s) {
                WordExpansion e = word_partial_commutator(w, s);
                int mlim = (w.rot_order() == 0) ? w.m : w.m + 1;
                if (!e.empty()
                    && (min_order(e) < 1 || max_order(e) > w.order()
                        || max_euler_exponent(e) > mlim)) {
                    ok = false;
                    why = "structure violated for " + word_str(w);
                }
                Atom ds = static_cast<Atom>(static_cast<int>(Atom::D1) + s);
                OperatorWord dw{{ds}};
                for (const Poly& f : probe) {
                    Poly direct = commutator_apply(w.as_operator(), dw, f);
                    for (std::size_t p = 0; p < 2; ++p) {
                        const auto& x = rpts[p];
                        if (direct.eval_exact(x) != eval_expansion_exact(e, f, x)) {
                            ok = false;
                            why = "value mismatch for " + word_str(w);
                        }
                    }
                }
            }
        all &= report(os, "word-derivative-commutators", ok,
                      ok ? std::to_string(words.size()) + " words, exact" : why);
    }

    // Normal-form words rewritten with polynomial coefficients in D^k.
    {
        bool ok = true;
        std::vector<SRWord> words;
        for (int m = 0; m <= 3; ++m)
            for (int n0 = 0; n0 + m <= 3; ++n0)
                for (int n1 = 0; n1 + n0 + m <= 3; ++n1)
                    for (int n2 = 0; n2 + n1 + n0 + m <= 3; ++n2) {
                        SRWord w{m, {n0, n1, n2}};
                        if (w.order() >= 1) words.push_back(w);
                    }
        for (const SRWord& w : words) {
            auto e = word_to_partials(w);
            for (const auto& [k, q] : e)
                if (k[0] + k[1] + k[2] > w.order()) ok = false;
            for (const Poly& f : basis_small) {
                Poly sum;
                for (const auto& [k, q] : e) {
                    Poly df = f;
                    for (int axis = 0; axis < 3; ++axis)
                        for (int c = 0; c < k[axis]; ++c) df = df.diff(axis);
                    sum += q * df;
                }
                if (!(sum - apply(w.as_operator(), f)).is_zero()) ok = false;
            }
        }
        all &= report(os, "words-as-rectangular", ok,
                      "exact polynomial identities, degree <= 4");
    }

    // Rectangular derivatives reconstructed from normal-form words.
    {
        bool ok = true;
        double worst = 0.0;
        std::vector<PartialIdx> idxs;
        for (int k0 = 0; k0 <= 3; ++k0)
            for (int k1 = 0; k1 + k0 <= 3; ++k1)
                for (int k2 = 0; k2 + k1 + k0 <= 3; ++k2)
                    if (k0 + k1 + k2 >= 1) idxs.push_back({k0, k1, k2});

        for (const PartialIdx& k : idxs) {
            WordExpansion e = partials_to_words(k);
            for (const Poly& f : basis_small) {
                Poly df = f;
                for (int axis = 0; axis < 3; ++axis)
                    for (int c = 0; c < k[axis]; ++c) df = df.diff(axis);
                for (const auto& x : rpts)
                    if (df.eval_exact(x) != eval_expansion_exact(e, f, x)) ok = false;
            }
        }
        // Float spot check on a denser annulus sample.
        WordExpansion e = partials_to_words({1, 1, 1});
        Poly f = Poly::variable(0) * Poly::variable(1) * Poly::variable(2)
                 * Poly::r_squared();
        Poly df = f.diff(0).diff(1).diff(2);
        for (const auto& x : annulus_samples(100, 0.4, 0.95, 20240801u))
            worst = std::max(worst, std::abs(df.eval(x) - eval_expansion(e, f, x)));
        ok = ok && worst <= 1e-11;
        all &= report(os, "rectangular-reconstruction", ok,
                      "max float residual " + std::to_string(worst));
    }

    return all;
}

} // namespace vfb
