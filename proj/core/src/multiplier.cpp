#include "valmult/multiplier.hpp"
#include "valmult/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace valmult {

namespace {

using Vec = RatVec;

// monomials of total degree < n, by degree then by power of y
std::vector<Mono> monomials_below(int n) {
    std::vector<Mono> out;
    for (int d = 0; d < n; ++d)
        for (int j = 0; j <= d; ++j) out.push_back({d - j, j});
    return out;
}

BivPoly from_vec(const Vec& v, const std::vector<Mono>& cols) {
    BivPoly p;
    for (size_t k = 0; k < cols.size(); ++k)
        if (v[k] != 0) p.add_term(cols[k].first, cols[k].second, v[k]);
    return p;
}

Vec to_vec(const BivPoly& p, const std::map<Mono, size_t>& index, size_t n) {
    Vec v(n);
    for (auto& [m, c] : p.terms) {
        auto it = index.find(m);
        if (it != index.end()) v[it->second] = c;
    }
    return v;
}

long ord_m(const Context& c, int E) { return c.divisors()[E].b; }

// Basis of {psi of degree < n : ord_E(psi) >= k_E for every condition}.
std::vector<BivPoly> condition_kernel(Context& ctx, const std::vector<DivisorCondition>& conds, int n) {
    auto cols = monomials_below(n);
    std::map<std::tuple<size_t, int, int, size_t>, Vec> rows;
    for (size_t ci = 0; ci < conds.size(); ++ci) {
        auto [E, k] = conds[ci];
        for (size_t col = 0; col < cols.size(); ++col) {
            auto [i, j] = cols[col];
            if ((long)(i + j) * ord_m(ctx, E) >= k) continue;
            const KPoly2& pm = ctx.pulled_monomial(E, i, j, static_cast<int>(k));
            for (auto& [ab, a] : pm.terms) {
                if (ab.first + ab.second >= k) continue;
                for (size_t q = 0; q < a.c.size(); ++q) {
                    if (a.c[q] == 0) continue;
                    auto& row = rows[{ci, ab.first, ab.second, q}];
                    if (row.empty()) row.assign(cols.size(), Rat(0));
                    row[col] = a.c[q];
                }
            }
        }
    }
    Echelon ech;
    for (auto& [key, row] : rows) ech.insert(row);
    std::vector<BivPoly> out;
    for (auto& v : ech.kernel(cols.size())) out.push_back(from_vec(v, cols));
    return out;
}

// Keep the candidates that are independent modulo m * J (all of degree <= n).
std::vector<BivPoly> prune(const std::vector<BivPoly>& cand, int n) {
    auto cols = monomials_below(n + 1);
    std::map<Mono, size_t> index;
    for (size_t k = 0; k < cols.size(); ++k) index[cols[k]] = k;
    Echelon ech;
    for (auto& g : cand) {
        ech.insert(to_vec((g * BivPoly::x()).truncate(n), index, cols.size()));
        ech.insert(to_vec((g * BivPoly::y()).truncate(n), index, cols.size()));
    }
    std::vector<BivPoly> out;
    for (auto& g : cand)
        if (ech.insert(to_vec(g, index, cols.size()))) out.push_back(g);
    return out;
}

// A resolution of a product presentation: principalizes every factor and
// separates the curve components of the principal parts.
struct Resolved {
    std::shared_ptr<Context> ctx;
    std::vector<std::pair<BivPoly, long>> curves;  // component through the origin, exponent in the product
    std::vector<long> r;                           // ord_E of the product
};

std::vector<BivPoly> nonzero(const std::vector<BivPoly>& g) {
    std::vector<BivPoly> out;
    for (auto& p : g)
        if (!p.is_zero()) out.push_back(p);
    if (out.empty()) throw DomainError("zero ideal");
    return out;
}

BivPoly gcd_of(const std::vector<BivPoly>& gens) {
    BivPoly phi;
    for (auto& g : gens) phi = phi.is_zero() ? normalize(g) : gcd(phi, g);
    return phi;
}

Resolved resolve(const IdealPresentation& I, long max_blowups) {
    if (I.factors.empty()) throw DomainError("empty ideal presentation");
    World w(max_blowups);
    std::vector<std::vector<BivPoly>> gens;
    std::vector<BivPoly> principals;
    for (auto& f : I.factors) {
        if (f.n < 0) throw DomainError("negative exponent in an ideal product");
        gens.push_back(nonzero(f.gens));
        BivPoly phi = gcd_of(gens.back());
        principals.push_back(phi);
        if (f.n == 0) continue;
        std::vector<BivPoly> rest;
        bool primary = true;
        for (auto& g : gens.back()) {
            rest.push_back(exact_div(g, phi));
            if (rest.back().constant_term() != 0) primary = false;
        }
        if (primary) w.add_ideal(rest);
    }
    Resolved res;
    auto fb = coprime_base(principals);
    for (size_t b = 0; b < fb.base.size(); ++b) {
        if (fb.base[b].constant_term() != 0) continue;
        long e = 0;
        for (size_t i = 0; i < I.factors.size(); ++i) e += (long)I.factors[i].n * fb.exponents[i][b];
        if (e == 0) continue;
        w.curve_objects(fb.base[b]);
        res.curves.push_back({fb.base[b], e});
    }
    res.ctx = w.shared();
    return res;
}

void fill_orders(Resolved& res, const IdealPresentation& I) {
    Context& c = *res.ctx;
    for (size_t E = res.r.size(); E < c.divisors().size(); ++E) {
        long r = 0;
        for (auto& f : I.factors) {
            if (f.n == 0) continue;
            long best = -1;
            for (auto& g : f.gens) {
                if (g.is_zero()) continue;
                long v = c.divisor_value(static_cast<int>(E), g);
                if (best < 0 || v < best) best = v;
            }
            r += f.n * best;
        }
        res.r.push_back(r);
    }
}

MultiplierIdealResult resolution_formula(Resolved& res, const IdealPresentation& I, const Rat& c, const char* prov) {
    if (c <= 0) throw DomainError("the exponent c must be positive");
    fill_orders(res, I);
    Context& ctx = *res.ctx;
    BivPoly phi(1);
    std::vector<CurveCondition> cc;
    for (auto& [C, n] : res.curves) {
        long k = to_long(floor_rat(c * n));
        if (k > 0) {
            phi = phi * pow(C, static_cast<int>(k));
            cc.push_back({C, k});
        }
    }
    std::vector<DivisorCondition> conds;
    for (size_t E = 0; E < ctx.divisors().size(); ++E) {
        const auto& d = ctx.divisors()[E];
        long k = to_long(floor_rat(c * res.r[E])) - (d.a - 1);
        if (k <= 0) continue;
        if (!phi.is_constant()) k -= ctx.divisor_value(static_cast<int>(E), phi);
        if (k > 0) conds.push_back({static_cast<int>(E), k});
    }
    auto J = ideal_from_conditions(res.ctx, phi, std::move(conds), prov);
    J.curve_conditions = cc;
    return J;
}

Rat sample_value(const Value& v) {
    check(!v.inf, "finite value expected");
    return v.v;
}

}  // namespace

bool MultiplierIdealResult::is_unit() const { return principal.is_constant() && conditions.empty(); }

MultiplierIdealResult ideal_from_conditions(std::shared_ptr<Context> ctx, const BivPoly& principal,
                                            std::vector<DivisorCondition> conditions, std::string provenance) {
    MultiplierIdealResult J;
    J.ctx = ctx;
    J.principal = principal;
    J.provenance = std::move(provenance);
    for (auto& c : conditions)
        if (c.threshold > 0) J.conditions.push_back(c);
    int n = 0;
    for (auto& c : J.conditions) {
        long b = ord_m(*ctx, c.divisor);
        n = std::max(n, static_cast<int>((c.threshold + b - 1) / b));
    }
    J.containment_order = n;
    std::vector<BivPoly> cand;
    if (n == 0) {
        cand.push_back(BivPoly(1));
    } else {
        cand = condition_kernel(*ctx, J.conditions, n);
        std::stable_sort(cand.begin(), cand.end(), [](const BivPoly& a, const BivPoly& b) { return a.order() < b.order(); });
        for (int j = 0; j <= n; ++j) cand.push_back(BivPoly::monomial(1, n - j, j));
        cand = prune(cand, n);
    }
    for (auto& g : cand) J.generators.push_back(principal * g);
    return J;
}

bool contains(const MultiplierIdealResult& J, const BivPoly& psi) {
    if (psi.is_zero()) return true;
    BivPoly q;
    if (!divides(J.principal, psi, &q)) return false;
    for (auto& c : J.conditions)
        if (J.ctx->divisor_value(c.divisor, q) < c.threshold) return false;
    return true;
}

bool same_ideal(const MultiplierIdealResult& a, const MultiplierIdealResult& b) {
    for (auto& g : a.generators)
        if (!contains(b, g)) return false;
    for (auto& g : b.generators)
        if (!contains(a, g)) return false;
    return true;
}

MultiplierIdealResult times(const MultiplierIdealResult& J, const BivPoly& phi) {
    if (phi.is_zero()) throw DomainError("product with zero");
    MultiplierIdealResult r = J;
    r.principal = J.principal * phi;
    for (auto& g : r.generators) g = g * phi;
    return r;
}

MultiplierIdealResult integral_closure(const IdealPresentation& I, long max_blowups) {
    Resolved res = resolve(I, max_blowups);
    fill_orders(res, I);
    Context& ctx = *res.ctx;
    BivPoly phi(1);
    for (auto& [C, n] : res.curves) phi = phi * pow(C, static_cast<int>(n));
    std::vector<DivisorCondition> conds;
    for (size_t E = 0; E < ctx.divisors().size(); ++E) {
        long k = res.r[E];
        if (k > 0 && !phi.is_constant()) k -= ctx.divisor_value(static_cast<int>(E), phi);
        if (k > 0) conds.push_back({static_cast<int>(E), k});
    }
    return ideal_from_conditions(res.ctx, phi, std::move(conds), "closure");
}

bool membership(World& w, const BivPoly& psi, const TreePotential& h) {
    if (psi.is_zero()) return false;
    return chi_max(w, h, psi).sup < 1;
}

MultiplierIdealResult multiplier_ideal_resolution(const IdealPresentation& I, const Rat& c, long max_blowups) {
    if (c <= 0) throw DomainError("the exponent c must be positive");
    Resolved res = resolve(I, max_blowups);
    return resolution_formula(res, I, c, "resolution");
}

MultiplierIdealResult multiplier_ideal_lipman(const IdealPresentation& I, const Rat& c, int extra, long max_blowups) {
    if (c <= 0) throw DomainError("the exponent c must be positive");
    Resolved res = resolve(I, max_blowups);
    int n = static_cast<int>(res.ctx->divisors().size());
    for (int E = 0; E < n; ++E) res.ctx->extend_with_free_points(E, extra);
    return resolution_formula(res, I, c, "lipman");
}

MultiplierIdealResult multiplier_ideal_potential(World& w, const TreePotential& h, bool verify) {
    Context& ctx = w.ctx();
    // curve atoms carrying at least one copy of their branch split off as factors
    BivPoly phi(1);
    std::vector<Atom> rest;
    std::vector<CurveCondition> cc;
    for (auto& a : h.atoms) {
        Pos p = w.pos(a.v);
        if (!p.inf) {
            rest.push_back(a);
            continue;
        }
        int e = end_of_node(p.node);
        Rat unit = Rat(ctx.edge_mult(p.node) * ctx.degree(p.node));
        long k = to_long(floor_rat(a.mass / unit));
        if (k > 0) {
            BivPoly C = w.branch_polynomial(e);
            if (C.is_zero()) throw DomainError("curve atom without a polynomial carrying only that branch");
            phi = phi * pow(C, static_cast<int>(k));
            cc.push_back({C, k});
        }
        if (a.mass > unit * k) rest.push_back({a.v, a.mass - unit * k});
    }
    TreePotential hr = make_potential(w, rest);
    for (auto& a : hr.atoms) {
        Pos p = w.pos(a.v);
        if (!p.inf) ctx.realize(p);
    }
    // nu(psi) + A(nu) > h(nu) at every divisor, i.e. ord_E(psi) > b_E (h(nu_E) - A_E)
    std::vector<DivisorCondition> conds;
    int n = static_cast<int>(ctx.divisors().size());
    for (int E = 0; E < n; ++E) {
        const auto& d = ctx.divisors()[E];
        Rat x = Rat(d.b) * (sample_value(eval_potential(w, hr, ctx.node_pos(E))) - d.A);
        long k = to_long(floor_rat(x)) + 1;
        if (k > 0) conds.push_back({E, k});
    }
    auto J = ideal_from_conditions(w.shared(), phi, std::move(conds), "potential");
    J.curve_conditions = cc;
    if (verify) {
        for (auto& g : J.generators) check(membership(w, g, h), "multiplier generator fails the valuative criterion");
        auto Jr = ideal_from_conditions(w.shared(), BivPoly(1), J.conditions, "potential");
        bool non_member = Jr.is_unit();
        for (int d = 0; d <= J.containment_order; ++d)
            for (int j = 0; j <= d; ++j) {
                BivPoly m = BivPoly::monomial(1, d - j, j);
                bool in = contains(Jr, m);
                check(in == membership(w, m, hr), "monomial membership differs between criteria");
                non_member = non_member || !in;
            }
        check(non_member, "no certificate non-member found");
    }
    return J;
}

Rat arnold(World& w, const TreePotential& h) {
    if (h.atoms.empty()) throw DomainError("zero potential");
    return chi_max(w, h, BivPoly(1)).sup;
}

Rat lct(World& w, const TreePotential& h) { return 1 / arnold(w, h); }

Rat lct(const IdealPresentation& I, long max_blowups) {
    Resolved res = resolve(I, max_blowups);
    fill_orders(res, I);
    Rat lam = 0;
    for (auto& [C, n] : res.curves) lam = std::max(lam, Rat(n));
    for (size_t E = 0; E < res.r.size(); ++E) lam = std::max(lam, rat(res.r[E], res.ctx->divisors()[E].a));
    if (lam == 0) throw DomainError("lct of the unit ideal");
    // the potential path must agree
    World w(res.ctx);
    TreePotential g;
    for (auto& f : I.factors) g = add(w, g, scale(w, tree_transform_ideal(w, f.gens), Rat(f.n)));
    check(arnold(w, g) == lam, "lct differs between resolution and potential");
    return 1 / lam;
}

Rat lct(const BivPoly& f, long max_blowups) { return lct(IdealPresentation({f}), max_blowups); }

std::vector<Rat> jumping_numbers(const IdealPresentation& I, const Rat& upto, long max_blowups) {
    if (upto <= 0) throw DomainError("the scan bound must be positive");
    Resolved res = resolve(I, max_blowups);
    fill_orders(res, I);
    std::set<Rat> cand;
    auto add_all = [&](long r) {
        for (long j = 1; rat(j, r) <= upto; ++j) cand.insert(rat(j, r));
    };
    for (long r : res.r)
        if (r > 0) add_all(r);
    for (auto& [C, n] : res.curves) add_all(n);
    std::vector<Rat> out;
    MultiplierIdealResult prev = integral_closure(IdealPresentation({BivPoly(1)}));
    for (auto& c : cand) {
        auto J = resolution_formula(res, I, c, "resolution");
        if (!same_ideal(J, prev)) out.push_back(c);
        prev = std::move(J);
    }
    return out;
}

ArnoldBounds arnold_bounds_check(World& w, const TreePotential& h) {
    ArnoldBounds r;
    Context& c = w.ctx();
    r.total = total_mass(h);
    r.lambda = h.atoms.empty() ? Rat(0) : arnold(w, h);
    // tangent directions at the root: atoms grouped by a nontrivial meet
    std::vector<Pos> ps;
    for (auto& a : h.atoms) ps.push_back(w.pos(a.v));
    std::vector<int> group(ps.size(), -1);
    int ng = 0;
    for (size_t i = 0; i < ps.size(); ++i) {
        if (c.same(ps[i], c.root_pos()) || group[i] >= 0) continue;
        group[i] = ng;
        for (size_t j = i + 1; j < ps.size(); ++j)
            if (group[j] < 0 && !c.same(c.meet(ps[i], ps[j]), c.root_pos())) group[j] = ng;
        ++ng;
    }
    for (int gi = 0; gi < ng; ++gi) {
        Rat m = 0;
        int first = 0;
        for (size_t i = 0; i < ps.size(); ++i) {
            if (group[i] != gi) continue;
            m += h.atoms[i].mass;
            auto path = c.path_to(ps[i].node);
            first = path.size() > 1 ? path[1] : ps[i].node;
        }
        // a closed direction stands for degree-many conjugate tangent vectors
        r.max_direction = std::max(r.max_direction, Rat(m / Rat(c.degree(first))));
    }
    r.bounds = r.total / 2 <= r.lambda && r.lambda <= r.total;
    r.half_iff = (r.lambda > r.total / 2) == (r.max_direction > r.total / 2);
    bool single_smooth = h.atoms.size() == 1 && ps[0].inf && c.edge_mult(ps[0].node) == 1 && c.degree(ps[0].node) == 1;
    r.top_iff = h.atoms.empty() || (r.lambda == r.total) == single_smooth;
    return r;
}

ZariskiData zariski_factor(World& w, const std::vector<BivPoly>& gens_in) {
    auto gens = nonzero(gens_in);
    ZariskiData z;
    z.principal = gcd_of(gens);
    auto g = tree_transform_ideal(w, gens);
    for (auto& a : g.atoms) {
        Pos p = w.pos(a.v);
        if (p.inf) continue;
        ReesFactor f;
        f.divisor = w.ctx().realize(p);
        f.v = w.divisorial(f.divisor);
        f.b = w.ctx().divisors()[f.divisor].b;
        f.degree = w.ctx().divisors()[f.divisor].degree;
        Rat n = a.mass / Rat(f.b * f.degree);
        check(is_integer(n), "Rees exponent is not an integer");
        f.n = static_cast<int>(to_long(n.get_num()));
        z.rees.push_back(f);
    }
    return z;
}

IdealPresentation reexpand(World& w, const ZariskiData& z) {
    IdealPresentation I;
    I.factors.push_back({{z.principal}, 1});
    for (auto& f : z.rees) {
        Rat s = Rat(f.b) * w.alpha(f.v).v;
        I.factors.push_back({valuation_ideal(w, f.v, s).generators, f.n});
    }
    return I;
}

MultiplierIdealResult valuation_ideal(World& w, const Valuation& v, const Rat& s) {
    if (s <= 0) throw DomainError("valuation ideal level must be positive");
    Pos p = w.pos(v);
    if (p.inf) throw DomainError("valuation ideals need a divisorial valuation");
    int E = w.ctx().realize(p);
    long k = to_long(ceil_rat(Rat(w.ctx().divisors()[E].b) * s));
    return ideal_from_conditions(w.shared(), BivPoly(1), {{E, k}}, "valuation");
}

GradedResult graded_asymptotic(World& w, const GradedSystem& G, const Rat& c) {
    if (c <= 0) throw DomainError("the exponent c must be positive");
    GradedResult r;
    if (G.kind == GradedKind::Power) {
        if (G.k0 < 0) throw DomainError("k0 must be nonnegative");
        r.g = tree_transform_ideal(w, G.ideal);
        // (1/k) g_{I^k} is the same potential for the first terms of the tail
        int k1 = std::max(G.k0, 1);
        for (int k = k1; k <= k1 + 1; ++k) {
            std::set<BivPoly> pk{BivPoly(1)};
            for (int i = 0; i < k; ++i) {
                std::set<BivPoly> next;
                for (auto& a : pk)
                    for (auto& b : G.ideal) next.insert(a * b);
                pk = std::move(next);
            }
            auto gk = scale(w, tree_transform_ideal(w, {pk.begin(), pk.end()}), rat(1, k));
            for (auto* side : {&r.g, &gk})
                for (auto& a : side->atoms)
                    check(eval_potential(w, gk, a.v) == eval_potential(w, r.g, a.v), "graded power system: tail terms differ");
        }
        r.J = multiplier_ideal_resolution(IdealPresentation(G.ideal), c, w.ctx().max_blowups());
        check(same_ideal(r.J, multiplier_ideal_potential(w, scale(w, r.g, c))), "graded power system: paths differ");
        r.lct = lct(w, r.g);
        return r;
    }
    Pos p = w.pos(G.v);
    if (p.inf) throw DomainError("a curve valuation has infinite skewness; its valuation system has zero potential");
    int E = w.ctx().realize(p);
    Rat al = w.ctx().divisors()[E].alpha;
    r.g = make_potential(w, {{w.divisorial(E), Rat(w.ctx().divisors()[E].degree) / al}});
    r.J = multiplier_ideal_potential(w, scale(w, r.g, c));
    r.lct = lct(w, r.g);
    return r;
}

TreePotential inverse_problem(World& w, const std::vector<BivPoly>& gens_in) {
    auto gens = nonzero(gens_in);
    Context& ctx = w.ctx();
    ZariskiData z = zariski_factor(w, gens);
    std::vector<Atom> atoms;
    if (!z.principal.is_constant()) atoms = tree_transform_poly(w, z.principal).atoms;
    std::vector<BivPoly> prim;
    for (auto& g : gens) prim.push_back(exact_div(g, z.principal));
    if (!z.rees.empty()) {
        auto gJ = tree_transform_ideal(w, prim);
        Rat m = total_mass(gJ);
        Rat eps = 1 / (m + 1);
        for (auto& f : z.rees) {
            Pos p = ctx.node_pos(f.divisor);
            Rat vJ = sample_value(eval_potential(w, gJ, p)), A = ctx.thinness(p);
            Rat b = Rat(f.b);
            int n = 1;
            while (eps * vJ - A + eps * Rat(n) / b <= -1 / b) ++n;
            Rat S = eps * vJ - A + eps * Rat(n) / b;
            check(S < 0 && S > -1 / b, "window for the curvette points is empty");
            for (int j = 0; j < f.n; ++j) {
                int E = ctx.extend_with_free_points(f.divisor, n);
                atoms.push_back({w.divisorial(E), (1 + eps) * b * Rat(f.degree)});
            }
        }
    }
    TreePotential g = make_potential(w, atoms);
    auto target = integral_closure(IdealPresentation(gens), ctx.max_blowups());
    check(same_ideal(multiplier_ideal_potential(w, g), target), "inverse problem round trip failed");
    return g;
}

SandwichReport equisingular_approx(World& w, const TreePotential& h, const Rat& t) {
    if (t <= 0) throw DomainError("t must be positive");
    SandwichReport rep;
    rep.J = multiplier_ideal_potential(w, scale(w, h, t));
    if (!rep.J.is_unit()) rep.ht = tree_transform_ideal(w, rep.J.generators);
    Context& c = w.ctx();
    std::vector<Pos> tips;
    for (auto& a : h.atoms) tips.push_back(w.pos(a.v));
    for (auto& a : rep.ht.atoms) tips.push_back(w.pos(a.v));
    SupportTree s = support_tree(w, tips);
    auto test = [&](const Pos& p) {
        Value hv = eval_potential(w, h, p), hv_t = eval_potential(w, rep.ht, p);
        if (hv.inf || hv_t.inf) return;
        ++rep.points;
        Rat lo = hv.v - c.thinness(p) / t, mid = hv_t.v / t;
        if (!(lo <= mid && mid <= hv.v)) rep.failures.push_back(w.json(w.at(p)));
    };
    for (size_t k = 0; k < s.vertices.size(); ++k) {
        const Pos& v = s.vertices[k];
        if (!v.inf) test(v);
        if (s.parent[k] < 0) continue;
        const Pos& u = s.vertices[s.parent[k]];
        test(c.locate(v.node, v.inf ? Rat(u.alpha + 1) : Rat((u.alpha + v.alpha) / 2)));
    }
    return rep;
}

std::string result_json(const MultiplierIdealResult& J) {
    nlohmann::json j;
    nlohmann::json gens = nlohmann::json::array(), conds = nlohmann::json::array(), curves = nlohmann::json::array();
    for (auto& g : J.generators) gens.push_back(to_string(g));
    for (auto& c : J.conditions) conds.push_back({{"divisor", c.divisor}, {"threshold", c.threshold}});
    for (auto& c : J.curve_conditions) curves.push_back({{"curve", to_string(c.curve)}, {"exponent", c.exponent}});
    j["generators"] = gens;
    j["containment_order"] = J.containment_order;
    j["conditions"] = conds;
    j["curve_conditions"] = curves;
    j["provenance"] = J.provenance;
    return j.dump();
}

}  // namespace valmult
