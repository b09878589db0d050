#include "valmult/kpoly2.hpp"

#include <algorithm>
#include <sstream>

namespace valmult {

KPoly2 KPoly2::from_biv(const FieldPtr& f, const BivPoly& p) {
    KPoly2 r(f);
    for (auto& [m, c] : p.terms) {
        Alg a(c);
        a.F = f;
        r.terms.emplace(m, a);
    }
    return r;
}

KPoly2 KPoly2::monomial(const FieldPtr& f, const Alg& c, int i, int j) {
    KPoly2 r(f);
    r.add_term(i, j, c);
    return r;
}

int KPoly2::order() const {
    int d = -1;
    for (auto& [m, c] : terms) {
        int t = m.first + m.second;
        if (d < 0 || t < d) d = t;
    }
    return d;
}

int KPoly2::total_degree() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.first + m.second);
    return d;
}

int KPoly2::ord_u() const {
    int d = -1;
    for (auto& [m, c] : terms)
        if (d < 0 || m.first < d) d = m.first;
    return d;
}

int KPoly2::ord_v() const {
    int d = -1;
    for (auto& [m, c] : terms)
        if (d < 0 || m.second < d) d = m.second;
    return d;
}

Alg KPoly2::coeff(int i, int j) const {
    auto it = terms.find({i, j});
    if (it == terms.end()) {
        Alg z;
        z.F = F;
        return z;
    }
    return it->second;
}

KPoly2 KPoly2::lowest_form() const {
    KPoly2 r(F);
    int o = order();
    for (auto& [m, c] : terms)
        if (m.first + m.second == o) r.terms.emplace(m, c);
    return r;
}

KPoly2 KPoly2::truncate(int d) const {
    KPoly2 r(F);
    for (auto& [m, c] : terms)
        if (m.first + m.second <= d) r.terms.emplace(m, c);
    return r;
}

KPoly2 KPoly2::div_u(int k) const {
    KPoly2 r(F);
    for (auto& [m, c] : terms) {
        check(m.first >= k, "div_u: not divisible");
        r.terms.emplace(Mono{m.first - k, m.second}, c);
    }
    return r;
}

KPoly2 KPoly2::div_v(int k) const {
    KPoly2 r(F);
    for (auto& [m, c] : terms) {
        check(m.second >= k, "div_v: not divisible");
        r.terms.emplace(Mono{m.first, m.second - k}, c);
    }
    return r;
}

void KPoly2::add_term(int i, int j, const Alg& c) {
    if (c.is_zero()) return;
    auto it = terms.find({i, j});
    if (it == terms.end()) {
        Alg a = c;
        a.F = F ? F : c.F;
        terms.emplace(Mono{i, j}, a);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
}

KPoly2& KPoly2::operator+=(const KPoly2& o) {
    if (!F) F = o.F;
    for (auto& [m, c] : o.terms) add_term(m.first, m.second, c);
    return *this;
}

KPoly2& KPoly2::operator-=(const KPoly2& o) {
    if (!F) F = o.F;
    for (auto& [m, c] : o.terms) add_term(m.first, m.second, -c);
    return *this;
}

KPoly2 KPoly2::operator-() const {
    KPoly2 r = *this;
    for (auto& [m, c] : r.terms) c = -c;
    return r;
}

KPoly2 KPoly2::scaled(const Alg& s) const {
    KPoly2 r(F);
    if (s.is_zero()) return r;
    for (auto& [m, c] : terms) r.terms.emplace(m, c * s);
    return r;
}

KPoly2 KPoly2::map(const Embedding& e) const {
    KPoly2 r(e.to);
    for (auto& [m, c] : terms) r.add_term(m.first, m.second, e(c));
    return r;
}

KPoly2 KPoly2::chart1(const Alg& cst) const {
    // u^a v^b -> u^(a+b) (v + c)^b
    KPoly2 r(F);
    std::vector<Alg> cp{Alg(Rat(1))};
    for (auto& [m, coef] : terms) {
        auto [a, b] = m;
        while ((int)cp.size() <= b) cp.push_back(cp.back() * cst);
        Int binom = 1;
        for (int k = 0; k <= b; ++k) {
            // C(b,k) v^k c^(b-k)
            Alg t = coef * cp[b - k] * Alg(Rat(binom));
            r.add_term(a + b, k, t);
            binom = binom * (b - k) / (k + 1);
        }
    }
    return r;
}

KPoly2 KPoly2::chart2() const {
    KPoly2 r(F);
    for (auto& [m, c] : terms) r.terms.emplace(Mono{m.first, m.first + m.second}, c);
    return r;
}

KPoly KPoly2::dehomogenize() const {
    std::vector<Alg> c;
    for (auto& [m, a] : terms) {
        if ((int)c.size() <= m.second) c.resize(m.second + 1);
        c[m.second] += a;
    }
    return KPoly(F, std::move(c));
}

KPoly2 operator+(KPoly2 a, const KPoly2& b) { return a += b; }
KPoly2 operator-(KPoly2 a, const KPoly2& b) { return a -= b; }

KPoly2 operator*(const KPoly2& a, const KPoly2& b) {
    KPoly2 r(a.F ? a.F : b.F);
    for (auto& [m1, c1] : a.terms)
        for (auto& [m2, c2] : b.terms) r.add_term(m1.first + m2.first, m1.second + m2.second, c1 * c2);
    return r;
}

KPoly2 mul_trunc(const KPoly2& a, const KPoly2& b, int d) {
    KPoly2 r(a.F ? a.F : b.F);
    for (auto& [m1, c1] : a.terms) {
        int d1 = m1.first + m1.second;
        if (d1 > d) continue;
        for (auto& [m2, c2] : b.terms)
            if (d1 + m2.first + m2.second <= d) r.add_term(m1.first + m2.first, m1.second + m2.second, c1 * c2);
    }
    return r;
}

KPoly2 substitute_trunc(const BivPoly& p, const KPoly2& X, const KPoly2& Y, int d) {
    const FieldPtr& F = X.F ? X.F : Y.F;
    int dx = std::max(p.deg_x(), 0), dy = std::max(p.deg_y(), 0);
    std::vector<KPoly2> xp{KPoly2::monomial(F, Alg(Rat(1)), 0, 0)}, yp{xp[0]};
    for (int i = 1; i <= dx; ++i) xp.push_back(mul_trunc(xp.back(), X, d));
    for (int j = 1; j <= dy; ++j) yp.push_back(mul_trunc(yp.back(), Y, d));
    KPoly2 r(F);
    for (auto& [m, c] : p.terms) {
        KPoly2 t = mul_trunc(xp[m.first], yp[m.second], d);
        Alg cc(c);
        cc.F = F;
        r += t.scaled(cc);
    }
    return r;
}

std::string to_string(const KPoly2& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << to_string(it->second);
        if (it->first.first) os << "*u^" << it->first.first;
        if (it->first.second) os << "*v^" << it->first.second;
    }
    return os.str();
}

}  // namespace valmult
