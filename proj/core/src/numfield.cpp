#include "valmult/numfield.hpp"

namespace valmult {

NumberField::NumberField(UPoly m) : modulus(m.monic()) {
    check(modulus.deg() >= 2, "number field modulus must have degree >= 2");
}

FieldPtr make_field(const UPoly& p) {
    if (p.deg() <= 1) return nullptr;
    return std::make_shared<const NumberField>(p);
}

std::string field_name(const FieldPtr& F) {
    if (!F) return "Q";
    return "Q[t]/(" + to_string(F->modulus, "t") + ")";
}

namespace {

const FieldPtr& pick(const Alg& a, const Alg& b) {
    if (a.F && b.F) check(a.F == b.F || a.F->modulus == b.F->modulus, "mixing elements of different fields");
    return a.F ? a.F : b.F;
}

void reduce(const FieldPtr& F, std::vector<Rat>& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (!F) {
        check(c.size() <= 1, "non-rational element without a field");
        return;
    }
    if ((int)c.size() > F->deg() - 1) {
        UPoly r = UPoly(c) % F->modulus;
        c = std::move(r.c);
    }
}

}  // namespace

Alg::Alg(const Rat& r) {
    if (r != 0) c.push_back(r);
}

Alg::Alg(FieldPtr f, std::vector<Rat> coeffs) : F(std::move(f)), c(std::move(coeffs)) { reduce(F, c); }

Alg::Alg(FieldPtr f, const UPoly& p) : Alg(std::move(f), p.c) {}

Alg Alg::gen(const FieldPtr& f) {
    check(f != nullptr, "Q has no generator");
    return Alg(f, std::vector<Rat>{Rat(0), Rat(1)});
}

Rat Alg::rational() const {
    check(is_rational(), "element is not rational");
    return c.empty() ? Rat(0) : c[0];
}

Alg Alg::operator-() const {
    Alg r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

Alg& Alg::operator+=(const Alg& o) {
    F = pick(*this, o);
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    while (!c.empty() && c.back() == 0) c.pop_back();
    return *this;
}

Alg& Alg::operator-=(const Alg& o) {
    F = pick(*this, o);
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) c[i] -= o.c[i];
    while (!c.empty() && c.back() == 0) c.pop_back();
    return *this;
}

Alg& Alg::operator*=(const Alg& o) {
    F = pick(*this, o);
    if (c.empty() || o.c.empty()) {
        c.clear();
        return *this;
    }
    if (o.c.size() == 1) {
        for (auto& x : c) x *= o.c[0];
        return *this;
    }
    if (c.size() == 1) {
        Rat s = c[0];
        c = o.c;
        for (auto& x : c) x *= s;
        return *this;
    }
    std::vector<Rat> r(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    c = std::move(r);
    reduce(F, c);
    return *this;
}

Alg Alg::inv() const {
    if (is_zero()) throw DomainError("division by zero in number field");
    if (is_rational()) return Alg(F, std::vector<Rat>{1 / c[0]});
    UPoly g, s, t;
    ext_gcd(poly(), F->modulus, g, s, t);
    check(g.deg() == 0, "modulus not irreducible");
    return Alg(F, s);
}

Rat Alg::norm() const {
    if (!F) return c.empty() ? Rat(0) : c[0];
    return resultant(F->modulus, poly());
}

Rat Alg::trace() const {
    if (!F) return c.empty() ? Rat(0) : c[0];
    Rat tr = 0;
    Alg th = gen(F), basis(F, std::vector<Rat>{Rat(1)});
    for (int i = 0; i < F->deg(); ++i) {
        Alg prod = *this * basis;
        if ((int)prod.c.size() > i) tr += prod.c[i];
        basis *= th;
    }
    return tr;
}

Alg operator+(Alg a, const Alg& b) { return a += b; }
Alg operator-(Alg a, const Alg& b) { return a -= b; }
Alg operator*(Alg a, const Alg& b) { return a *= b; }
Alg operator/(const Alg& a, const Alg& b) { return a * b.inv(); }

Alg pow(Alg a, long e) {
    Alg r(Rat(1));
    r.F = a.F;
    while (e > 0) {
        if (e & 1) r *= a;
        a *= a;
        e >>= 1;
    }
    return r;
}

std::string to_string(const Alg& a) {
    if (a.is_rational()) return to_string(a.rational());
    return "(" + to_string(a.poly(), "t") + ")";
}

Alg Embedding::operator()(const Alg& a) const {
    if (a.is_rational()) {
        Alg r = a;
        r.F = to;
        return r;
    }
    check(from != nullptr, "embedding source mismatch");
    Alg acc;
    acc.F = to;
    for (size_t i = a.c.size(); i-- > 0;) {
        acc *= image;
        acc += Alg(a.c[i]);
    }
    acc.F = to;
    return acc;
}

Embedding Embedding::identity(const FieldPtr& F) {
    Embedding e;
    e.from = F;
    e.to = F;
    if (F) e.image = Alg::gen(F);
    return e;
}

Embedding compose(const Embedding& first, const Embedding& second) {
    Embedding e;
    e.from = first.from;
    e.to = second.to;
    if (first.from) e.image = second(first.image);
    return e;
}

// ---- polynomials over K ----

KPoly::KPoly(FieldPtr f, std::vector<Alg> coeffs) : F(std::move(f)), c(std::move(coeffs)) {
    for (auto& a : c) a.F = F;
    trim();
}

KPoly KPoly::from_upoly(const FieldPtr& f, const UPoly& p) {
    std::vector<Alg> c;
    for (auto& r : p.c) c.emplace_back(r);
    return KPoly(f, std::move(c));
}

void KPoly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

KPoly KPoly::monic() const {
    if (is_zero()) return *this;
    Alg il = lc().inv();
    KPoly r = *this;
    for (auto& a : r.c) a *= il;
    return r;
}

KPoly KPoly::derivative() const {
    std::vector<Alg> r;
    for (size_t i = 1; i < c.size(); ++i) r.push_back(c[i] * Alg(Rat(static_cast<long>(i))));
    return KPoly(F, std::move(r));
}

Alg KPoly::eval(const Alg& x) const {
    Alg acc;
    acc.F = F;
    for (size_t i = c.size(); i-- > 0;) {
        acc *= x;
        acc += c[i];
    }
    return acc;
}

KPoly KPoly::compose(const KPoly& q) const {
    KPoly acc(F, {});
    for (size_t i = c.size(); i-- > 0;) acc = acc * q + KPoly(F, {c[i]});
    return acc;
}

KPoly KPoly::map(const Embedding& e) const {
    std::vector<Alg> r;
    for (auto& a : c) r.push_back(e(a));
    return KPoly(e.to, std::move(r));
}

KPoly operator+(const KPoly& a, const KPoly& b) {
    std::vector<Alg> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return KPoly(a.F ? a.F : b.F, std::move(r));
}

KPoly operator-(const KPoly& a, const KPoly& b) {
    std::vector<Alg> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return KPoly(a.F ? a.F : b.F, std::move(r));
}

KPoly operator*(const KPoly& a, const KPoly& b) {
    const FieldPtr& F = a.F ? a.F : b.F;
    if (a.is_zero() || b.is_zero()) return KPoly(F, {});
    std::vector<Alg> r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return KPoly(F, std::move(r));
}

std::pair<KPoly, KPoly> divmod(const KPoly& a, const KPoly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    const FieldPtr& F = a.F ? a.F : b.F;
    KPoly r = a;
    r.F = F;
    if (a.deg() < b.deg()) return {KPoly(F, {}), r};
    std::vector<Alg> q(a.deg() - b.deg() + 1);
    Alg il = b.lc().inv();
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int k = r.deg() - b.deg();
        Alg f = r.lc() * il;
        q[k] = f;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[k + j] -= f * b.c[j];
        r.c.back() = Alg();
        r.trim();
    }
    return {KPoly(F, std::move(q)), r};
}

KPoly gcd(const KPoly& a, const KPoly& b) {
    KPoly x = a, y = b;
    while (!y.is_zero()) {
        KPoly r = divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

KPoly squarefree_part(const KPoly& a) {
    if (a.deg() <= 0) return KPoly(a.F, {Alg(Rat(1))});
    KPoly g = gcd(a, a.derivative());
    return divmod(a.monic(), g).first;
}

UPoly norm_poly(const KPoly& a) {
    if (!a.F) {
        std::vector<Rat> c;
        for (auto& x : a.c) c.push_back(x.rational());
        return UPoly(c);
    }
    int d = a.F->deg();
    int n = a.deg() * d;
    std::vector<Rat> xs, ys;
    for (int i = 0; i <= n; ++i) {
        Alg z0{Rat(i)};
        z0.F = a.F;
        xs.emplace_back(i);
        ys.push_back(a.eval(z0).norm());
    }
    return interpolate(xs, ys);
}

namespace {

// Yun's squarefree decomposition over K.
std::vector<std::pair<KPoly, int>> sqf_decomp(const KPoly& a) {
    std::vector<std::pair<KPoly, int>> out;
    if (a.deg() <= 0) return out;
    KPoly f = a.monic();
    KPoly d = f.derivative();
    KPoly g = gcd(f, d);
    KPoly b = divmod(f, g).first, c = divmod(d, g).first;
    int i = 1;
    while (b.deg() > 0) {
        KPoly e = c - b.derivative();
        KPoly h = gcd(b, e);
        if (h.deg() > 0) out.emplace_back(h, i);
        b = divmod(b, h).first;
        c = divmod(e, h).first;
        ++i;
    }
    return out;
}

std::vector<KFactor> factor_sqfree_q(const KPoly& f, int mult) {
    std::vector<KFactor> out;
    for (auto& [g, e] : factor(norm_poly(f))) {
        (void)e;
        KFactor k;
        k.factor = KPoly::from_upoly(nullptr, g);
        k.multiplicity = mult;
        if (g.deg() == 1) {
            k.L = nullptr;
            k.root = Alg(-g.c[0]);
        } else {
            k.L = make_field(g);
            k.root = Alg::gen(k.L);
        }
        k.embed.from = nullptr;
        k.embed.to = k.L;
        out.push_back(std::move(k));
    }
    return out;
}

std::vector<KFactor> factor_sqfree_k(const KPoly& f, int mult) {
    const FieldPtr& K = f.F;
    Alg theta = Alg::gen(K);
    const UPoly& m = K->modulus;
    for (int attempt = 0; attempt < 64; ++attempt) {
        long k = (attempt % 2 == 1) ? (attempt + 1) / 2 : -(attempt / 2);
        KPoly shift(K, {theta * Alg(Rat(-k)), Alg(Rat(1))});
        KPoly G = f.compose(shift);
        UPoly N = norm_poly(G);
        if (gcd(N, N.derivative()).deg() > 0) continue;

        std::vector<KFactor> out;
        KPoly back(K, {theta * Alg(Rat(k)), Alg(Rat(1))});
        for (auto& [Ni, e] : factor(N)) {
            (void)e;
            KPoly h = gcd(G, KPoly::from_upoly(K, Ni));
            KFactor kf;
            kf.factor = h.compose(back).monic();
            kf.multiplicity = mult;
            if (kf.factor.deg() == 1) {
                kf.L = K;
                kf.embed = Embedding::identity(K);
                kf.root = -kf.factor.c[0];
            } else {
                FieldPtr L = make_field(Ni);
                Alg s = Alg::gen(L);
                // theta in L: common root of m(X) and f(s - kX)
                KPoly X(L, {Alg(), Alg(Rat(1))});
                KPoly lin(L, {s, Alg(Rat(-k))});
                KPoly Fx(L, {});
                KPoly pw(L, {Alg(Rat(1))});
                for (size_t j = 0; j < f.c.size(); ++j) {
                    KPoly cj = KPoly::from_upoly(L, f.c[j].poly());
                    Fx = Fx + cj * pw;
                    pw = pw * lin;
                }
                KPoly g = gcd(KPoly::from_upoly(L, m), Fx);
                check(g.deg() == 1, "Trager: generator image not unique");
                Alg thL = -g.c[0];
                kf.L = L;
                kf.embed.from = K;
                kf.embed.to = L;
                kf.embed.image = thL;
                kf.root = s - Alg(Rat(k)) * thL;
            }
            check(kf.factor.map(kf.embed).eval(kf.root).is_zero(), "Trager: root check failed");
            out.push_back(std::move(kf));
        }
        return out;
    }
    throw ResourceError("Trager factorization: no squarefree norm shift found");
}

}  // namespace

std::vector<KFactor> factor_over(const KPoly& a) {
    std::vector<KFactor> out;
    for (auto& [part, mult] : sqf_decomp(a)) {
        auto fs = part.F ? factor_sqfree_k(part, mult) : factor_sqfree_q(part, mult);
        for (auto& f : fs) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace valmult
