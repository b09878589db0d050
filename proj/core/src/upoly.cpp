#include "valmult/upoly.hpp"

#include <sstream>

namespace valmult {

UPoly UPoly::monomial(const Rat& a, int k) {
    UPoly p;
    if (a == 0) return p;
    p.c.assign(k + 1, Rat(0));
    p.c[k] = a;
    return p;
}

void UPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

int UPoly::ord() const {
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) return static_cast<int>(i);
    return -1;
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    UPoly r = *this;
    Rat l = lc();
    for (auto& x : r.c) x /= l;
    return r;
}

UPoly UPoly::derivative() const {
    UPoly r;
    for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * Rat(static_cast<long>(i)));
    r.trim();
    return r;
}

Rat UPoly::eval(const Rat& t) const {
    Rat acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

UPoly UPoly::compose(const UPoly& q) const {
    UPoly acc;
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * q;
        acc += UPoly(c[i]);
    }
    return acc;
}

UPoly UPoly::shift(const Rat& a) const {
    UPoly lin(std::vector<Rat>{a, Rat(1)});
    return compose(lin);
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    trim();
    return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
    trim();
    return *this;
}

UPoly& UPoly::operator*=(const Rat& a) {
    if (a == 0) {
        c.clear();
        return *this;
    }
    for (auto& x : c) x *= a;
    return *this;
}

UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
UPoly operator*(UPoly a, const Rat& s) { return a *= s; }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return UPoly(std::move(r));
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    UPoly q, r = a;
    if (a.deg() < b.deg()) return {q, r};
    q.c.assign(a.deg() - b.deg() + 1, Rat(0));
    const Rat& l = b.lc();
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int k = r.deg() - b.deg();
        Rat f = r.lc() / l;
        q.c[k] = f;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[k + j] -= f * b.c[j];
        r.trim();
    }
    q.trim();
    return {q, r};
}

UPoly operator/(const UPoly& a, const UPoly& b) {
    auto [q, r] = divmod(a, b);
    check(r.is_zero(), "inexact univariate division");
    return q;
}

UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = x % y;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

void ext_gcd(const UPoly& a, const UPoly& b, UPoly& g, UPoly& s, UPoly& t) {
    UPoly r0 = a, r1 = b, s0(Rat(1)), s1, t0, t1(Rat(1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        g = r0;
        s = UPoly();
        t = UPoly();
        return;
    }
    Rat l = r0.lc();
    g = r0 * (1 / l);
    s = s0 * (1 / l);
    t = t0 * (1 / l);
}

UPoly squarefree_part(const UPoly& a) {
    if (a.deg() <= 0) return a.is_zero() ? a : UPoly(Rat(1));
    return a.monic() / gcd(a, a.derivative());
}

// Yun's algorithm.
std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& a) {
    std::vector<std::pair<UPoly, int>> out;
    if (a.deg() <= 0) return out;
    UPoly f = a.monic();
    UPoly d = f.derivative();
    UPoly g = gcd(f, d);
    UPoly b = f / g, c = d / g;
    int i = 1;
    for (;;) {
        UPoly e = c - b.derivative();
        if (b.deg() <= 0) break;
        UPoly h = gcd(b, e);
        if (h.deg() > 0) out.emplace_back(h, i);
        b = b / h;
        c = e / h;
        ++i;
    }
    return out;
}

Rat resultant(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    if (a.deg() == 0) {
        Rat r = 1;
        for (int i = 0; i < b.deg(); ++i) r *= a.lc();
        return r;
    }
    if (b.deg() == 0) {
        Rat r = 1;
        for (int i = 0; i < a.deg(); ++i) r *= b.lc();
        return r;
    }
    int m = a.deg(), n = b.deg();
    UPoly r = a % b;
    if (r.is_zero()) return 0;
    Rat lb = 1;
    for (int i = 0; i < m - r.deg(); ++i) lb *= b.lc();
    Rat sgn = (m % 2 == 1 && n % 2 == 1) ? Rat(-1) : Rat(1);
    return sgn * lb * resultant(b, r);
}

std::vector<Int> primitive_integer(const UPoly& a) {
    std::vector<Int> v;
    if (a.is_zero()) return v;
    Int l = 1;
    for (auto& x : a.c) l = lcm(l, x.get_den());
    Int g = 0;
    for (auto& x : a.c) {
        Rat y = x * Rat(l);
        v.push_back(y.get_num());
        g = gcd(g, y.get_num());
    }
    if (v.back() < 0) g = -g;
    for (auto& z : v) z /= g;
    return v;
}

UPoly from_integer(const std::vector<Int>& v) {
    std::vector<Rat> c;
    for (auto& z : v) c.emplace_back(z);
    return UPoly(std::move(c));
}

bool is_irreducible(const UPoly& a) {
    if (a.deg() <= 0) return false;
    auto f = factor(a);
    return f.size() == 1 && f[0].second == 1;
}

UPoly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
    // Newton divided differences.
    size_t n = xs.size();
    std::vector<Rat> d = ys;
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) {
            d[i] = (d[i] - d[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    UPoly p(d[n - 1]);
    for (size_t k = n - 1; k-- > 0;) {
        p = p * UPoly(std::vector<Rat>{-xs[k], Rat(1)});
        p += UPoly(d[k]);
    }
    return p;
}

std::string to_string(const UPoly& p, const char* var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.deg(); i >= 0; --i) {
        const Rat& a = p.c[i];
        if (a == 0) continue;
        Rat mag = abs(a);
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = mag == 1;
        if (!unit || i == 0) os << to_string(mag);
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

}  // namespace valmult
