#include "valmult/branch.hpp"
#include "valmult/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>

namespace valmult {

struct PuiseuxLevel {
    int p, q, u, v;
    Alg xi;  // in the final field of the leaf
};

struct PuiseuxLeaf {
    std::vector<PuiseuxLevel> levels;
    KPoly2 F;  // regular at the origin: F(0,0) = 0, F_Y(0,0) != 0
    FieldPtr K;
};

namespace {

std::atomic<int> next_call{1};

using Series = std::vector<Alg>;

Alg zero_in(const FieldPtr& K) {
    Alg z;
    z.F = K;
    return z;
}

Series smul(const Series& a, const Series& b, int n) {
    Series r(n);
    for (int i = 0; i < (int)a.size() && i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j < (int)b.size() && i + j < n; ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
}

Series sinv(const Series& a, int n) {
    check(!a.empty() && !a[0].is_zero(), "series inverse of a non-unit");
    Series r(n);
    Alg i0 = a[0].inv();
    r[0] = i0;
    for (int k = 1; k < n; ++k) {
        Alg s;
        for (int j = 1; j <= k && j < (int)a.size(); ++j)
            if (!a[j].is_zero() && !r[k - j].is_zero()) s += a[j] * r[k - j];
        r[k] = -(s * i0);
    }
    return r;
}

// G(X, Y(X)) and dG/dY(X, Y(X)) mod X^n by Horner in Y.
std::pair<Series, Series> eval_with_derivative(const KPoly2& G, const Series& Y, int n) {
    int B = 0;
    for (auto& [m, c] : G.terms) B = std::max(B, m.second);
    std::vector<Series> g(B + 1, Series(n));
    for (auto& [m, c] : G.terms)
        if (m.first < n) g[m.second][m.first] += c;
    Series v = g[B], d(n);
    for (int b = B - 1; b >= 0; --b) {
        d = smul(d, Y, n);
        for (int i = 0; i < n; ++i) d[i] += v[i];
        v = smul(v, Y, n);
        for (int i = 0; i < n; ++i) v[i] += g[b][i];
    }
    return {v, d};
}

Series solve_regular(const KPoly2& G, int n) {
    Series Y(n);
    for (int prec = 1; prec < n;) {
        prec = std::min(n, 2 * prec);
        Series y(Y.begin(), Y.begin() + prec);
        auto [v, d] = eval_with_derivative(G, y, prec);
        Series corr = smul(v, sinv(d, prec), prec);
        for (int i = 0; i < prec; ++i) Y[i] -= corr[i];
    }
    for (auto& c : Y) c.F = G.F;
    return Y;
}

struct Run {
    BranchOptions opt;
    std::vector<Branch> out;
    std::vector<int> part_of;
};

// Coprime factors still passing through the current point, transformed alongside.
using Live = std::vector<std::pair<int, KPoly2>>;

struct LevelRec {
    int p, q, u, v;
    Alg xi;
};

KPoly2 duval_subst(const KPoly2& F, int p, int q, int u, int v, const Alg& xi, long max_terms) {
    KPoly2 r(F.F);
    std::map<long, Alg> pw;
    auto xpow = [&](long e) -> const Alg& {
        auto it = pw.find(e);
        if (it != pw.end()) return it->second;
        return pw.emplace(e, pow(xi, e)).first->second;
    };
    long l = -1;
    for (auto& [m, c] : F.terms) {
        long w = long(p) * m.first + long(q) * m.second;
        if (l < 0 || w < l) l = w;
    }
    for (auto& [m, c] : F.terms) {
        int a = m.first, b = m.second;
        long xe = long(p) * a + long(q) * b - l;
        Alg base = c * xpow(long(v) * a);
        Int binom = 1;
        for (int k = 0; k <= b; ++k) {
            r.add_term(static_cast<int>(xe), k, base * xpow(long(u) * (b - k)) * Alg(Rat(binom)));
            binom = binom * (b - k) / (k + 1);
        }
        if ((long)r.terms.size() > max_terms) throw ResourceError("Newton-Puiseux term ceiling exceeded");
    }
    return r;
}

void emit(Run& run, const KPoly2& F, const FieldPtr& K, const std::vector<LevelRec>& levels,
          const std::vector<PuiseuxStep>& path, long P, int part) {
    run.part_of.push_back(part);
    auto leaf = std::make_shared<PuiseuxLeaf>();
    leaf->K = K;
    leaf->F = F;
    for (auto& L : levels) leaf->levels.push_back({L.p, L.q, L.u, L.v, L.xi});
    Branch b;
    b.K = K;
    b.degree = field_degree(K);
    b.m = static_cast<int>(P);
    b.path = path;
    for (auto& s : path)
        if (!s.zero && s.p > 1) b.char_exponents.push_back(s.exponent);
    b.leaf = leaf;
    run.out.push_back(std::move(b));
}

void recurse(Run& run, const KPoly2& F, const FieldPtr& K, int r, std::vector<LevelRec> levels,
             std::vector<PuiseuxStep> path, const Rat& E, long P, const Live& live) {
    if (r == 1) {
        check(!F.coeff(0, 1).is_zero(), "regular leaf without linear term");
        check(live.size() == 1, "regular leaf on several factors");
        emit(run, F, K, levels, path, P, live[0].first);
        return;
    }
    int ov = F.ord_v();
    if (ov >= 1) {
        check(ov == 1, "repeated factor reached Newton-Puiseux");
        int part = -1;
        for (auto& [k, G] : live)
            if (G.ord_v() >= 1) part = k;
        check(part >= 0, "zero branch without a factor");
        PuiseuxStep s;
        s.edge = -1;
        s.zero = true;
        auto p2 = path;
        p2.push_back(s);
        emit(run, KPoly2::monomial(K, Alg(Rat(1)), 0, 1), K, levels, p2, P, part);
    }
    // lowest a for each b <= r
    std::map<int, int> low;
    for (auto& [m, c] : F.terms)
        if (m.second <= r) {
            auto it = low.find(m.second);
            if (it == low.end() || m.first < it->second) low[m.second] = m.first;
        }
    check(low.count(r) && low[r] == 0, "Newton polygon does not start on the Y axis");
    int a0 = 0, b0 = r, edge = 0;
    while (b0 > ov) {
        int a1 = -1, b1 = -1;
        Rat best;
        for (auto& [b, a] : low) {
            if (b >= b0) continue;
            Rat s(Rat(a - a0) / Rat(b0 - b));
            if (a1 < 0 || s < best || (s == best && b < b1)) {
                best = s;
                a1 = a;
                b1 = b;
            }
        }
        int db = b0 - b1, da = a1 - a0;
        int g = std::gcd(db, da);
        int p = db / g, q = da / g;
        std::vector<Alg> phi;
        for (int k = 0; k <= g; ++k) phi.push_back(F.coeff(a1 - k * q, b1 + k * p));
        KPoly ph(K, phi);
        ph.trim();
        int u = 1, v = 0;
        if (q == 1) {
            u = 1;
            v = p - 1;
        } else {
            for (u = 1; u <= q; ++u)
                if ((long(u) * p) % q == 1) break;
            v = static_cast<int>((long(u) * p - 1) / q);
        }
        auto facs = factor_over(ph.monic());
        Rat E2 = E + Rat(q) / Rat(P * p);
        for (size_t fi = 0; fi < facs.size(); ++fi) {
            const KFactor& kf = facs[fi];
            std::vector<LevelRec> lv;
            for (auto& L : levels) lv.push_back({L.p, L.q, L.u, L.v, kf.embed(L.xi)});
            Alg xi = kf.root;
            xi.F = kf.L;
            lv.push_back({p, q, u, v, xi});
            KPoly2 F2 = duval_subst(F.map(kf.embed), p, q, u, v, xi, run.opt.max_terms);
            auto p2 = path;
            PuiseuxStep s;
            s.edge = edge;
            s.factor = static_cast<int>(fi);
            s.p = p;
            s.q = q;
            s.exponent = E2;
            p2.push_back(s);
            Live next;
            for (auto& [k, G] : live) {
                KPoly2 G2 = duval_subst(G.map(kf.embed), p, q, u, v, xi, run.opt.max_terms);
                if (G2.constant_term().is_zero()) next.emplace_back(k, std::move(G2));
            }
            recurse(run, F2, kf.L, kf.multiplicity, lv, p2, E2, P * p, next);
        }
        a0 = a1;
        b0 = b1;
        ++edge;
    }
}

// y(s) to order n from the leaf data.
std::pair<Alg, Series> parametrize(const PuiseuxLeaf& leaf, int n, int& e_out) {
    const FieldPtr& K = leaf.K;
    Series y = solve_regular(leaf.F, n);
    Alg gamma(Rat(1));
    gamma.F = K;
    long e = 1;
    for (size_t i = leaf.levels.size(); i-- > 0;) {
        const auto& L = leaf.levels[i];
        // y_{i-1} = gamma^q s^(e q) (xi^u + y_i)
        Series t = y;
        t[0] += pow(L.xi, L.u);
        Alg gq = pow(gamma, L.q);
        long sh = e * L.q;
        Series r(n, zero_in(K));
        for (long k = 0; k + sh < n; ++k) r[k + sh] = t[k] * gq;
        y = std::move(r);
        gamma = pow(L.xi, L.v) * pow(gamma, L.p);
        e *= L.p;
    }
    e_out = static_cast<int>(e);
    for (auto& c : y) c.F = K;
    return {gamma, y};
}

int order_on(const Branch& b, const BivPoly& fs, int n) {
    Series y = branch_series(b, n);
    // x^i y^j = gamma^i s^(m i) y^j
    int dy = std::max(0, fs.deg_y());
    std::vector<Series> yp{Series(n)};
    yp[0][0] = Alg(Rat(1));
    for (int j = 1; j <= dy; ++j) yp.push_back(smul(yp.back(), y, n));
    Series acc(n);
    for (auto& [mm, c] : fs.terms) {
        long sh = long(b.m) * mm.first;
        if (sh >= n) continue;
        Alg coef = Alg(c) * pow(b.gamma, mm.first);
        const Series& t = yp[mm.second];
        for (long k = 0; k + sh < n; ++k)
            if (!t[k].is_zero()) acc[k + sh] += coef * t[k];
    }
    for (int k = 0; k < n; ++k)
        if (!acc[k].is_zero()) return k;
    return -1;
}

int pick_shear(const BivPoly& S) {
    BivPoly L = S.lowest_form();
    for (int k = 0;; ++k) {
        int lam = (k % 2 ? 1 : -1) * ((k + 1) / 2);
        Rat v = 0;
        for (auto& [m, c] : L.terms) {
            Rat t = c;
            for (int i = 0; i < m.first; ++i) t *= lam;
            v += t;
        }
        if (v != 0) return lam;
    }
}

}  // namespace

namespace {

// Branches of the product of the inputs; flags[i][k] tells whether branch i lies on input k.
std::vector<Branch> decompose(const std::vector<BivPoly>& inputs, const BranchOptions& opt,
                              std::vector<std::vector<int>>* flags) {
    BivPoly all(1);
    for (auto& p : inputs) {
        if (p.is_zero()) throw DomainError("zero polynomial has no branches");
        if (p.constant_term() != 0) throw DomainError("polynomial does not vanish at the origin");
        all = all * p;
    }
    FactorBase fb = coprime_base(inputs);
    BivPoly S(1);
    std::vector<int> idx;
    for (size_t i = 0; i < fb.base.size(); ++i) {
        if (fb.base[i].constant_term() != 0) continue;
        S = S * fb.base[i];
        idx.push_back(static_cast<int>(i));
    }
    int lam = opt.shear != -1000000 ? opt.shear : pick_shear(S);
    BivPoly Ss = S.shear_x(Rat(lam));
    int r = Ss.order();
    check(Ss.coeff(0, r) != 0, "shear did not make the curve transversal");
    Run run;
    run.opt = opt;
    Live live;
    for (int i : idx) live.emplace_back(i, KPoly2::from_biv(nullptr, fb.base[i].shear_x(Rat(lam))));
    recurse(run, KPoly2::from_biv(nullptr, Ss), nullptr, r, {}, {}, Rat(0), 1, live);

    int call = next_call++;
    std::vector<Branch> out;
    for (size_t i = 0; i < run.out.size(); ++i) {
        Branch b = std::move(run.out[i]);
        int part = run.part_of[i];
        b.shear = lam;
        b.call = call;
        b.index = static_cast<int>(i);
        b.defining_factor = fb.base[part];
        b.multiplicity_in_input = 0;
        for (size_t k = 0; k < inputs.size(); ++k) b.multiplicity_in_input += fb.exponents[k][part];
        if (flags) {
            std::vector<int> f;
            for (size_t k = 0; k < inputs.size(); ++k) f.push_back(fb.exponents[k][part]);
            flags->push_back(f);
        }
        int e = 0;
        auto [g, y] = parametrize(*b.leaf, 1, e);
        check(e == b.m, "ramification differs from multiplicity");
        b.gamma = g;
        out.push_back(std::move(b));
    }
    // truncation: beyond twice the largest contact plus the multiplicity
    Rat cmax = 1;
    for (auto& a : out) {
        for (auto& c : a.char_exponents) cmax = std::max(cmax, c);
        for (auto& b : out)
            if (a.index < b.index) cmax = std::max(cmax, contact_from_paths(a, b));
    }
    for (auto& b : out) {
        Int T = ceil_rat(Rat(b.m) * (2 * cmax + 1)) + 1;
        int n = static_cast<int>(to_long(T));
        if (n > opt.max_order) throw ResourceError("series order ceiling exceeded");
        int e = 0;
        b.series = parametrize(*b.leaf, n, e).second;
        // the defining factor vanishes on the branch to the recorded order
        check(order_on(b, b.defining_factor.shear_x(Rat(lam)), n) < 0, "truncated series is not a root of the input");
    }
    long total = 0;
    for (auto& b : out) total += long(b.multiplicity_in_input) * b.m * b.degree;
    check(total == mult_at_origin(all), "branch multiplicities do not add up");
    return out;
}

}  // namespace

std::vector<Branch> puiseux_branches(const BivPoly& p, const BranchOptions& opt) { return decompose({p}, opt, nullptr); }

std::vector<Rat> branch_char_exponents(const Branch& b) { return b.char_exponents; }

std::vector<Alg> branch_series(const Branch& b, int n) {
    if (n <= b.truncation()) return Series(b.series.begin(), b.series.begin() + n);
    int e = 0;
    return parametrize(*b.leaf, n, e).second;
}

int branch_order_of(const Branch& b, const BivPoly& f, int n) { return order_on(b, f.shear_x(Rat(b.shear)), n); }

BivPoly branch_minimal_polynomial(const Branch& b, int max_degree) {
    for (int D = 1; D <= max_degree; ++D) {
        // a curve of degree D not containing the branch meets it at most D * max_degree times
        int n = D * max_degree + 1;
        Series y = branch_series(b, n);
        std::vector<Series> yp{Series(n)};
        yp[0][0] = Alg(Rat(1));
        for (int j = 1; j <= D; ++j) yp.push_back(smul(yp.back(), y, n));
        std::vector<Mono> cols;
        for (int d = 1; d <= D; ++d)
            for (int j = 0; j <= d; ++j) cols.push_back({d - j, j});
        int kd = field_degree(b.K);
        std::vector<RatVec> rows(size_t(n) * kd, RatVec(cols.size()));
        for (size_t c = 0; c < cols.size(); ++c) {
            auto [i, j] = cols[c];
            long sh = long(b.m) * i;
            Alg coef = pow(b.gamma, i);
            for (long k = 0; k + sh < n; ++k) {
                if (yp[j][k].is_zero()) continue;
                Alg t = coef * yp[j][k];
                for (size_t q = 0; q < t.c.size(); ++q) rows[size_t(k + sh) * kd + q][c] = t.c[q];
            }
        }
        Echelon ech;
        for (auto& r : rows) ech.insert(r);
        auto ker = ech.kernel(cols.size());
        if (ker.empty()) continue;
        BivPoly g;
        for (size_t c = 0; c < cols.size(); ++c)
            if (ker[0][c] != 0) g.add_term(cols[c].first, cols[c].second, ker[0][c]);
        return normalize(g.shear_x(Rat(-b.shear)));
    }
    throw DomainError("branch has no defining polynomial of the expected degree");
}

Rat contact_from_paths(const Branch& a, const Branch& b) {
    check(a.call == b.call, "paths of different decompositions are not comparable");
    check(a.index != b.index, "contact of a branch with itself");
    size_t k = 0;
    while (k < a.path.size() && k < b.path.size() && !a.path[k].zero && !b.path[k].zero &&
           a.path[k].edge == b.path[k].edge && a.path[k].factor == b.path[k].factor)
        ++k;
    check(k < a.path.size() && k < b.path.size(), "branch paths do not separate");
    const auto &sa = a.path[k], &sb = b.path[k];
    Rat kappa;
    if (sa.zero)
        kappa = sb.exponent;
    else if (sb.zero)
        kappa = sa.exponent;
    else
        kappa = std::min(sa.exponent, sb.exponent);
    // average over the conjugates of b of the coincidence with one conjugate of a
    Rat s = kappa;
    long e = b.m;
    for (auto& beta : b.char_exponents) {
        Rat sk = beta * Rat(b.m);
        check(is_integer(sk), "characteristic exponent not on the s-grid");
        long e2 = std::gcd(e, to_long(sk.get_num()));
        s += Rat(e - e2) * std::min(kappa, beta);
        e = e2;
    }
    check(e == 1, "characteristic exponents do not exhaust the multiplicity");
    return s / Rat(b.m);
}

Value branch_contact(const Branch& a, const Branch& b) {
    if (a.call == b.call) {
        if (a.index == b.index) return Value::infinity();
        return Value(contact_from_paths(a, b));
    }
    BivPoly fa = normalize(a.defining_factor), fb = normalize(b.defining_factor);
    std::vector<std::vector<int>> flags;
    auto D = decompose({fa, fb}, {}, &flags);
    auto locate = [&](const Branch& x, int which) {
        int hit = -1;
        for (auto& c : D) {
            if (!flags[c.index][which]) continue;
            if (c.m != x.m || c.degree != x.degree || c.char_exponents != x.char_exponents) continue;
            if (hit >= 0) throw DomainError("branch is not determined by its defining factor");
            hit = c.index;
        }
        check(hit >= 0, "branch lost in merged decomposition");
        return hit;
    };
    int ia = locate(a, 0), ib = locate(b, 1);
    if (ia == ib) return Value::infinity();
    return Value(contact_from_paths(D[ia], D[ib]));
}

std::string branch_json(const Branch& b, int terms) {
    nlohmann::json j;
    j["m"] = b.m;
    j["degree"] = b.degree;
    j["multiplicity"] = b.multiplicity_in_input;
    j["defining_factor"] = to_string(b.defining_factor);
    j["shear"] = b.shear;
    j["field"] = field_name(b.K);
    nlohmann::json ce = nlohmann::json::array();
    for (auto& c : b.char_exponents) ce.push_back(to_string(c));
    j["char_exponents"] = ce;
    j["x"] = {{"coefficient", to_string(b.gamma)}, {"exponent", b.m}};
    nlohmann::json s = nlohmann::json::array();
    int n = terms > 0 ? std::min(terms, b.truncation()) : b.truncation();
    for (int k = 0; k < n; ++k)
        if (!b.series[k].is_zero()) s.push_back({k, to_string(b.series[k])});
    j["series"] = s;
    j["truncation"] = b.truncation();
    return j.dump();
}

}  // namespace valmult
