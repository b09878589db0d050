// Factorization over Q: squarefree split, then Zassenhaus (factor mod a small
// prime, linear Hensel lifting, subset recombination).
#include "valmult/upoly.hpp"

#include <algorithm>
#include <cstdint>

namespace valmult {
namespace {

using i64 = std::int64_t;
using MP = std::vector<i64>;  // coefficients mod p, low to high

i64 md(i64 a, i64 p) {
    a %= p;
    return a < 0 ? a + p : a;
}

i64 inv_mod(i64 a, i64 p) {
    i64 r0 = p, r1 = md(a, p), s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        std::swap(r0 -= q * r1, r1);
        std::swap(s0 -= q * s1, s1);
    }
    check(r0 == 1, "non-invertible residue");
    return md(s0, p);
}

void mtrim(MP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

MP mmul(const MP& a, const MP& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    MP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    mtrim(r);
    return r;
}

MP msub(MP a, const MP& b, i64 p) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = md(a[i] - b[i], p);
    mtrim(a);
    return a;
}

void mdivmod(const MP& a, const MP& b, i64 p, MP& q, MP& r) {
    r = a;
    q.clear();
    check(!b.empty(), "mod-p division by zero");
    if (r.size() < b.size()) return;
    q.assign(r.size() - b.size() + 1, 0);
    i64 il = inv_mod(b.back(), p);
    while (!r.empty() && r.size() >= b.size()) {
        size_t k = r.size() - b.size();
        i64 f = r.back() * il % p;
        q[k] = f;
        for (size_t j = 0; j < b.size(); ++j) r[k + j] = md(r[k + j] - f * b[j], p);
        mtrim(r);
    }
    mtrim(q);
}

MP mmod(const MP& a, const MP& b, i64 p) {
    MP q, r;
    mdivmod(a, b, p, q, r);
    return r;
}

MP mmonic(MP a, i64 p) {
    if (a.empty()) return a;
    i64 il = inv_mod(a.back(), p);
    for (auto& x : a) x = x * il % p;
    return a;
}

MP mgcd(MP a, MP b, i64 p) {
    while (!b.empty()) {
        MP r = mmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mmonic(a, p);
}

// s*a + t*b = 1 mod p, assuming coprime.
void mext(const MP& a, const MP& b, i64 p, MP& s, MP& t) {
    MP r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        MP q, r;
        mdivmod(r0, r1, p, q, r);
        MP s2 = msub(s0, mmul(q, s1, p), p), t2 = msub(t0, mmul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    check(r0.size() == 1, "Hensel seeds not coprime");
    i64 il = inv_mod(r0[0], p);
    for (auto& x : s0) x = x * il % p;
    for (auto& x : t0) x = x * il % p;
    s = s0;
    t = t0;
}

MP mpowmod(MP base, const Int& e, const MP& m, i64 p) {
    MP r{1};
    base = mmod(base, m, p);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = mmod(mmul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mmod(mmul(r, base, p), m, p);
    }
    return r;
}

MP reduce(const std::vector<Int>& f, i64 p) {
    MP r;
    Int pp = p;
    for (auto& z : f) {
        Int m;
        mpz_fdiv_r(m.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t());
        r.push_back(m.get_si());
    }
    mtrim(r);
    return r;
}

struct Lcg {
    std::uint64_t s;
    i64 next(i64 p) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<i64>((s >> 33) % static_cast<std::uint64_t>(p));
    }
};

// Cantor-Zassenhaus equal-degree split of a monic product of degree-d factors.
void edf(const MP& g, int d, i64 p, Lcg& rng, std::vector<MP>& out) {
    int n = static_cast<int>(g.size()) - 1;
    if (n == d) {
        out.push_back(g);
        return;
    }
    Int e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    for (;;) {
        MP a(n);
        for (auto& x : a) x = rng.next(p);
        mtrim(a);
        if (a.size() < 2) continue;
        MP b = mpowmod(a, e, g, p);
        b = msub(b, MP{1}, p);
        MP h = mgcd(g, b, p);
        int dh = static_cast<int>(h.size()) - 1;
        if (dh > 0 && dh < n) {
            MP q, r;
            mdivmod(g, h, p, q, r);
            edf(h, d, p, rng, out);
            edf(mmonic(q, p), d, p, rng, out);
            return;
        }
    }
}

// Monic irreducible factors of a monic squarefree polynomial mod p.
std::vector<MP> factor_mod(MP f, i64 p) {
    std::vector<MP> out;
    Lcg rng{0x9e3779b97f4a7c15ULL};
    MP x{0, 1};
    MP h = x;
    for (int i = 1; 2 * i <= static_cast<int>(f.size()) - 1; ++i) {
        h = mpowmod(h, Int(p), f, p);
        MP g = mgcd(f, msub(h, x, p), p);
        if (g.size() > 1) {
            edf(g, i, p, rng, out);
            MP q, r;
            mdivmod(f, g, p, q, r);
            f = mmonic(q, p);
            h = mmod(h, f, p);
        }
    }
    if (f.size() > 1) out.push_back(f);
    return out;
}

// Integer polynomial helpers for lifting.
using ZP = std::vector<Int>;

void ztrim(ZP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZP zmul(const ZP& a, const ZP& b) {
    if (a.empty() || b.empty()) return {};
    ZP r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}

ZP zmod(ZP a, const Int& m) {
    for (auto& z : a) mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), m.get_mpz_t());
    ztrim(a);
    return a;
}

ZP zsym(ZP a, const Int& m) {
    Int half = m / 2;
    for (auto& z : a) {
        mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), m.get_mpz_t());
        if (z > half) z -= m;
    }
    ztrim(a);
    return a;
}

ZP from_mp(const MP& a) {
    ZP r;
    for (auto x : a) r.emplace_back(static_cast<long>(x));
    return r;
}

// Lift f = lc(f) * g * h (mod p) to mod p^k, g monic. Returns lifted (g, h).
std::pair<ZP, ZP> hensel2(const ZP& f, const MP& g0, const MP& h0, i64 p, int k) {
    MP s, t;
    mext(g0, h0, p, s, t);
    ZP g = from_mp(g0), h = from_mp(h0);
    h.back() = f.back();  // keep the true leading coefficient so residues drop degree
    Int pj = p;
    Int P = p;
    for (int j = 1; j < k; ++j) {
        ZP gh = zmul(g, h);
        ZP e(std::max(f.size(), gh.size()), Int(0));
        for (size_t i = 0; i < f.size(); ++i) e[i] += f[i];
        for (size_t i = 0; i < gh.size(); ++i) e[i] -= gh[i];
        for (auto& z : e) {
            check(mpz_divisible_p(z.get_mpz_t(), pj.get_mpz_t()) != 0, "Hensel residue not divisible");
            z /= pj;
        }
        MP em = reduce(e, p);
        MP dg = mmod(mmul(t, em, p), g0, p);
        MP q, r;
        mdivmod(msub(em, mmul(h0, dg, p), p), g0, p, q, r);
        check(r.empty(), "Hensel step inexact");
        ZP zdg = from_mp(dg), zdh = from_mp(q);
        if (zdg.size() > g.size()) g.resize(zdg.size(), Int(0));
        for (size_t i = 0; i < zdg.size(); ++i) g[i] += pj * zdg[i];
        if (zdh.size() > h.size()) h.resize(zdh.size(), Int(0));
        for (size_t i = 0; i < zdh.size(); ++i) h[i] += pj * zdh[i];
        pj *= P;
    }
    ZP hr = zmod(h, pj);
    hr.resize(h.size(), Int(0));
    hr.back() = f.back();
    return {zmod(g, pj), hr};
}

// All monic lifts of the modular factors (product times lc(f) = f mod p^k).
std::vector<ZP> hensel_all(ZP f, std::vector<MP> fac, i64 p, int k, const Int& pk) {
    std::vector<ZP> out;
    while (fac.size() > 1) {
        MP g0 = fac.front();
        MP rest = reduce(std::vector<Int>{f.back()}, p);
        for (size_t i = 1; i < fac.size(); ++i) rest = mmul(rest, fac[i], p);
        auto [g, h] = hensel2(f, g0, rest, p, k);
        out.push_back(g);
        f = h;
        fac.erase(fac.begin());
    }
    // remaining factor: f / lc(f) mod p^k
    Int l = f.back(), il;
    check(mpz_invert(il.get_mpz_t(), l.get_mpz_t(), pk.get_mpz_t()) != 0, "leading coefficient not a unit");
    for (auto& z : f) z *= il;
    out.push_back(zmod(f, pk));
    return out;
}

ZP primitive(ZP a) {
    Int g = 0;
    for (auto& z : a) g = gcd(g, z);
    if (g == 0) return a;
    if (a.back() < 0) g = -g;
    for (auto& z : a) z /= g;
    return a;
}

// Exact division over Z; false if not divisible.
bool zdivides(const ZP& d, const ZP& f, ZP& q) {
    ZP r = f;
    if (r.size() < d.size()) return false;
    q.assign(r.size() - d.size() + 1, Int(0));
    while (!r.empty() && r.size() >= d.size()) {
        size_t k = r.size() - d.size();
        if (mpz_divisible_p(r.back().get_mpz_t(), d.back().get_mpz_t()) == 0) return false;
        Int c = r.back() / d.back();
        q[k] = c;
        for (size_t j = 0; j < d.size(); ++j) r[k + j] -= c * d[j];
        ztrim(r);
    }
    return r.empty();
}

bool is_prime_small(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if ((int)cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Primitive integer factors of a squarefree primitive integer polynomial.
std::vector<ZP> zassenhaus(const ZP& f) {
    int n = static_cast<int>(f.size()) - 1;
    if (n <= 1) return {f};
    ZP fd;
    for (int i = 1; i <= n; ++i) fd.push_back(f[i] * i);

    i64 best_p = 0;
    std::vector<MP> best;
    int tried = 0;
    for (i64 p = 3; tried < 5 && p < 100000; p += 2) {
        if (!is_prime_small(p)) continue;
        if (mpz_divisible_ui_p(f.back().get_mpz_t(), static_cast<unsigned long>(p))) continue;
        MP fp = reduce(f, p), fdp = reduce(fd, p);
        if (mgcd(fp, fdp, p).size() != 1) continue;
        auto fac = factor_mod(mmonic(fp, p), p);
        ++tried;
        if (best_p == 0 || fac.size() < best.size()) {
            best_p = p;
            best = fac;
        }
        if (best.size() == 1) return {f};
    }
    check(best_p != 0, "no good prime found");
    i64 p = best_p;

    // Mignotte-style bound on factor coefficients
    Int norm2 = 0;
    for (auto& z : f) norm2 += z * z;
    Int nrm = sqrt(norm2) + 1;
    Int bound = 2 * abs(f.back()) * nrm;
    bound <<= n;
    int k = 1;
    Int pk = p;
    while (pk <= bound) {
        pk *= p;
        ++k;
    }

    std::vector<ZP> lifted = hensel_all(f, best, p, k, pk);
    std::vector<ZP> out;
    ZP g = f;
    int s = 1;
    while (2 * s <= (int)lifted.size()) {
        std::vector<std::vector<int>> subs;
        std::vector<int> cur;
        subsets(static_cast<int>(lifted.size()), s, 0, cur, subs);
        bool found = false;
        for (auto& S : subs) {
            ZP cand{g.back()};
            for (int i : S) cand = zmod(zmul(cand, lifted[i]), pk);
            cand = primitive(zsym(cand, pk));
            ZP q;
            if (zdivides(cand, g, q)) {
                out.push_back(cand);
                g = q;
                std::vector<ZP> rest;
                for (int i = 0; i < (int)lifted.size(); ++i)
                    if (std::find(S.begin(), S.end(), i) == S.end()) rest.push_back(lifted[i]);
                lifted = rest;
                found = true;
                break;
            }
        }
        if (!found) ++s;
    }
    if (g.size() > 1) out.push_back(primitive(g));
    return out;
}

}  // namespace

std::vector<std::pair<UPoly, int>> factor(const UPoly& a) {
    std::vector<std::pair<UPoly, int>> out;
    for (auto& [part, mult] : squarefree_decomposition(a)) {
        for (auto& z : zassenhaus(primitive_integer(part))) out.emplace_back(from_integer(z).monic(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) {
        if (u.first.deg() != v.first.deg()) return u.first.deg() < v.first.deg();
        if (u.second != v.second) return u.second < v.second;
        for (int i = u.first.deg(); i >= 0; --i)
            if (u.first.c[i] != v.first.c[i]) return u.first.c[i] < v.first.c[i];
        return false;
    });
    return out;
}

}  // namespace valmult
