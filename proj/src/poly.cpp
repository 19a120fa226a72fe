#include "vfb/poly.hpp"

#include <sstream>
#include <vector>

namespace vfb {

Poly Poly::constant(const Rat& c)
{
    Poly p;
    p.add_term(Mono{}, c);
    return p;
}

Poly Poly::variable(int axis)
{
    Mono m;
    m.e[axis] = 1;
    return monomial(m, 1);
}

Poly Poly::monomial(const Mono& m, const Rat& c)
{
    Poly p;
    p.add_term(m, c);
    return p;
}

Poly Poly::r_squared()
{
    Poly p;
    for (int i = 0; i < 3; ++i) {
        Mono m;
        m.e[i] = 2;
        p.add_term(m, 1);
    }
    return p;
}

int Poly::degree() const
{
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

void Poly::add_term(const Mono& m, const Rat& c)
{
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
    Poly out;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            Mono m;
            for (int i = 0; i < 3; ++i) m.e[i] = ma.e[i] + mb.e[i];
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Poly Poly::operator-() const
{
    return scaled(-1);
}

Poly Poly::scaled(const Rat& c) const
{
    Poly out;
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

Poly Poly::diff(int axis) const
{
    Poly out;
    for (const auto& [m, c] : terms_) {
        if (m.e[axis] == 0) continue;
        Mono d = m;
        d.e[axis] -= 1;
        out.add_term(d, c * m.e[axis]);
    }
    return out;
}

Poly Poly::mul_var(int axis) const
{
    Poly out;
    for (const auto& [m, c] : terms_) {
        Mono d = m;
        d.e[axis] += 1;
        out.terms_.emplace(d, c);
    }
    return out;
}

std::optional<Poly> Poly::divide_r2() const
{
    // Single-divisor multivariate division by x1^2 + x2^2 + x3^2 with
    // lexicographic order (leading divisor term x1^2). Exact: succeeds iff
    // the remainder cancels completely.
    const Poly r2 = Poly::r_squared();
    Poly p = *this;
    Poly q;
    while (!p.is_zero()) {
        // lexicographically largest monomial
        const auto it = std::prev(p.terms_.end());
        const Mono m = it->first;
        const Rat c = it->second;
        if (m.e[0] < 2) return std::nullopt; // cannot be cancelled later in lex order
        Mono d = m;
        d.e[0] -= 2;
        q.add_term(d, c);
        p -= Poly::monomial(d, c) * r2;
    }
    return q;
}

Rat Poly::eval_exact(const std::array<Rat, 3>& x) const
{
    Rat sum = 0;
    for (const auto& [m, c] : terms_) {
        Rat v = c;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < m.e[i]; ++k) v *= x[i];
        sum += v;
    }
    return sum;
}

double Poly::eval(const std::array<double, 3>& x) const
{
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double v = c.convert_to<double>();
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < m.e[i]; ++k) v *= x[i];
        sum += v;
    }
    return sum;
}

std::string Poly::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int i = 0; i < 3; ++i)
            if (m.e[i] > 0) os << "*x" << (i + 1) << "^" << m.e[i];
    }
    return os.str();
}

std::vector<Poly> monomial_basis(int max_degree)
{
    std::vector<Poly> out;
    for (int d = 0; d <= max_degree; ++d)
        for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) {
                Mono m;
                m.e = {i, j, d - i - j};
                out.push_back(Poly::monomial(m, 1));
            }
    return out;
}

} // namespace vfb
