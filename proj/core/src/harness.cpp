#include "valmult/harness.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace valmult {

namespace {

using Rng = std::mt19937_64;

Rng case_rng(std::uint64_t seed, unsigned suite, unsigned i) {
    std::seed_seq s{static_cast<unsigned>(seed & 0xffffffffu), static_cast<unsigned>(seed >> 32), suite, i};
    return Rng(s);
}

int pick(Rng& r, int n) { return static_cast<int>(r() % static_cast<std::uint64_t>(n)); }

const BivPoly X = BivPoly::x();
const BivPoly Y = BivPoly::y();

// irreducible germs through the origin
const char* const kPool[] = {"x",         "y",         "y - x",       "y + x",           "y - x^2",
                             "y^2 - x^3", "x^2 - y^3", "y^2 - x^5",   "y^3 - x^4",       "y^2 - 2*x^2",
                             "y - x^2 + x^3", "y^2 - 2*x*y + x^2 - x^3"};

BivPoly pool_branch(Rng& r) { return parse_poly(kPool[pick(r, std::size(kPool))]); }

// kind: 0 monomial, 1 principal, 2 mixed, -1 random
std::vector<BivPoly> ideal_from(Rng& r, int kind = -1) {
    std::vector<BivPoly> g;
    switch (kind < 0 ? pick(r, 3) : kind % 3) {
    case 0: {  // monomial
        int k = 2 + pick(r, 2);
        for (int i = 0; i < k; ++i) {
            int d = 1 + pick(r, 5);
            int a = pick(r, d + 1);
            g.push_back(BivPoly::monomial(1, a, d - a));
        }
        break;
    }
    case 1: {  // principal, a product of branches
        BivPoly f(1);
        int k = 1 + pick(r, 2);
        for (int i = 0; i < k; ++i) f = f * pow(pool_branch(r), 1 + pick(r, 4) / 3);
        g.push_back(f);
        break;
    }
    default: {  // mixed
        BivPoly f = pool_branch(r);
        switch (pick(r, 3)) {
        case 0: g = {f, pow(X, 2 + pick(r, 3))}; break;
        case 1: g = {f * X, f * Y}; break;
        default: g = {f, pool_branch(r) * pow(Y, pick(r, 2))}; break;
        }
    }
    }
    return g;
}

std::string ideal_text(const std::vector<BivPoly>& g) {
    std::string s;
    for (auto& p : g) s += (s.empty() ? "" : ", ") + to_string(p);
    return "(" + s + ")";
}

size_t ideal_size(const std::vector<BivPoly>& g) {
    size_t n = 0;
    for (auto& p : g) n += p.terms.size() + static_cast<size_t>(std::max(0, p.total_degree()));
    return n;
}

const Rat kExponents[] = {rat(1, 2), Rat(1), rat(3, 2), Rat(2)};

struct Potential {
    TreePotential h;
    std::string text;
    size_t size = 0;
};

Potential random_potential(World& w, Rng& r) {
    Potential p;
    auto g = ideal_from(r);
    Rat c = kExponents[pick(r, 4)];
    p.h = scale(w, tree_transform_ideal(w, g), c);
    p.text = to_string(c) + "*g" + ideal_text(g);
    p.size = ideal_size(g);
    if (pick(r, 3) == 0) {
        Rat m = rat(1, 1 + pick(r, 3));
        p.h = add(w, p.h, make_potential(w, {{w.root(), m}}));
        p.text += " + " + to_string(m) + "*delta(m)";
        ++p.size;
    }
    return p;
}

// random irreducible germ with a single rational branch
BivPoly random_branch(Rng& r) {
    int a = pick(r, 3) - 1;
    switch (pick(r, 3)) {
    case 0:
        if (pick(r, 4) == 0) return X - pow(Y, 2) * Rat(pick(r, 2));
        return Y - X * Rat(a) - pow(X, 2) * Rat(pick(r, 2));
    case 1: {
        int q = 2 + pick(r, 2);
        int p = q + 1 + pick(r, q + 2);
        while (std::gcd(p, q) != 1) ++p;
        return pow(Y - X * Rat(a), q) - pow(X, p);
    }
    default: {
        int q = 2 + pick(r, 2);
        int p = q + 1 + pick(r, q + 2);
        while (std::gcd(p, q) != 1) ++p;
        return pow(X - Y * Rat(pick(r, 4) == 0 ? a : 0), q) - pow(Y, p);
    }
    }
}

std::vector<std::pair<BivPoly, int>> random_factors(Rng& r) {
    std::vector<std::pair<BivPoly, int>> out;
    int k = 2 + pick(r, 2);
    while (static_cast<int>(out.size()) < 2 || k-- > 0) {
        BivPoly f = normalize(random_branch(r));
        int e = pick(r, 4) == 0 ? 2 : 1;
        auto it = std::find_if(out.begin(), out.end(), [&](auto& q) { return q.first == f; });
        if (it != out.end())
            it->second += e;
        else
            out.push_back({f, e});
    }
    return out;
}

struct Outcome {
    bool ok = true;
    std::string input;
    size_t size = 0;
    std::string detail;
};

using CaseFn = std::function<Outcome(Rng&, int)>;

SuiteReport run_suite(const std::string& name, unsigned tag, int cases, std::uint64_t seed, int workers,
                      const CaseFn& fn) {
    SuiteReport rep;
    rep.name = name;
    rep.cases = std::max(0, cases);
    std::vector<Outcome> out(static_cast<size_t>(rep.cases));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i; (i = next++) < rep.cases;) {
            Rng r = case_rng(seed, tag, static_cast<unsigned>(i));
            Outcome o;
            try {
                o = fn(r, i);
            } catch (const std::exception& e) {
                o.ok = false;
                o.detail = std::string("exception: ") + e.what();
            }
            out[static_cast<size_t>(i)] = std::move(o);
        }
    };
    int n = std::clamp(workers, 1, std::max(1, rep.cases));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    const Outcome* worst = nullptr;
    for (auto& o : out) {
        if (o.ok) {
            ++rep.passed;
        } else if (!worst || o.size < worst->size) {
            worst = &o;
        }
    }
    if (worst) {
        rep.counterexample = worst->input;
        rep.detail = worst->detail;
    }
    return rep;
}

Outcome fail(Outcome o, std::string why) {
    o.ok = false;
    o.detail = std::move(why);
    return o;
}

MultiplierIdealResult product_closure(const MultiplierIdealResult& a, const MultiplierIdealResult& b) {
    IdealPresentation P;
    if (!a.is_unit()) P.factors.push_back({a.generators, 1});
    if (!b.is_unit()) P.factors.push_back({b.generators, 1});
    if (P.factors.empty()) P.factors.push_back({{BivPoly(1)}, 1});
    return integral_closure(P);
}

// ---- suites ----

Outcome two_path_case(Rng& r, int i) {
    Outcome o;
    auto g = ideal_from(r, i);
    o.input = ideal_text(g);
    o.size = ideal_size(g);
    for (Rat c : {rat(1, 2), Rat(1), rat(3, 2)}) {
        World w;
        auto Jp = multiplier_ideal_potential(w, scale(w, tree_transform_ideal(w, g), c));
        auto Jr = multiplier_ideal_resolution(IdealPresentation(g), c);
        if (!same_ideal(Jp, Jr)) return fail(o, "paths differ at c = " + to_string(c));
        auto Jc = integral_closure(IdealPresentation(Jr.generators));
        if (!same_ideal(Jc, Jr)) return fail(o, "not integrally closed at c = " + to_string(c));
    }
    return o;
}

Outcome lipman_case(Rng& r) {
    Outcome o;
    auto g = ideal_from(r);
    Rat c = kExponents[pick(r, 4)];
    int extra = 1 + pick(r, 2);
    o.input = ideal_text(g) + "^" + to_string(c) + " extra " + std::to_string(extra);
    o.size = ideal_size(g);
    auto Jl = multiplier_ideal_lipman(IdealPresentation(g), c, extra);
    auto Jr = multiplier_ideal_resolution(IdealPresentation(g), c);
    if (!same_ideal(Jl, Jr)) return fail(o, "extra divisors change the ideal");
    return o;
}

Outcome subadditivity_case(Rng& r) {
    World w;
    auto a = random_potential(w, r);
    auto b = random_potential(w, r);
    Outcome o;
    o.input = a.text + " ; " + b.text;
    o.size = a.size + b.size;
    auto J12 = multiplier_ideal_potential(w, add(w, a.h, b.h));
    auto J1 = multiplier_ideal_potential(w, a.h);
    auto J2 = multiplier_ideal_potential(w, b.h);
    auto P = product_closure(J1, J2);
    for (auto& g : J12.generators) {
        if (!contains(P, g)) return fail(o, to_string(g) + " is not in J(h1) J(h2)");
        if (!contains(J1, g) || !contains(J2, g)) return fail(o, "J(h1 + h2) is not below J(h1) and J(h2)");
    }
    return o;
}

Outcome skoda_curve_case(Rng& r, int i) {
    World w;
    Potential h;
    BivPoly phi = X;
    if (i > 0) {
        h = random_potential(w, r);
        phi = pool_branch(r);
        if (pick(r, 2)) phi = phi * pool_branch(r);
    } else {
        h.text = "0";
    }
    Outcome o;
    o.input = "h = " + h.text + ", phi = " + to_string(phi);
    o.size = h.size + ideal_size({phi});
    auto lhs = multiplier_ideal_potential(w, add(w, h.h, tree_transform_poly(w, phi)));
    auto rhs = times(multiplier_ideal_potential(w, h.h), phi);
    if (!same_ideal(lhs, rhs)) return fail(o, "J(h + g_phi) differs from phi J(h)");
    return o;
}

Outcome skoda_ideal_case(Rng& r, int i, bool cusp) {
    World w;
    // simple complete ideal of nu0: {nu0 >= b alpha}
    Valuation v0 = cusp ? w.quasimonomial(X, rat(3, 2)) : w.root();
    Rat s = cusp ? Rat(3) : Rat(1);
    auto I0 = valuation_ideal(w, v0, s);
    auto g0 = tree_transform_ideal(w, I0.generators);
    Potential h;
    if (i > 0)
        h = random_potential(w, r);
    else
        h.text = "0";
    Outcome o;
    o.input = std::string(cusp ? "nu0 = (3/2, b=2)" : "nu0 = m") + ", h = " + h.text;
    o.size = h.size;
    auto lhs = multiplier_ideal_potential(w, add(w, h.h, scale(w, g0, 2)));
    auto Jh = multiplier_ideal_potential(w, add(w, h.h, g0));
    auto rhs = product_closure(I0, Jh);
    if (!same_ideal(lhs, rhs)) return fail(o, "J(h + 2 g0) differs from I0 J(h + g0)");
    return o;
}

Outcome semicontinuity_case(Rng& r) {
    World w;
    auto h = random_potential(w, r);
    Outcome o;
    o.input = h.text;
    o.size = h.size;
    auto J = multiplier_ideal_potential(w, h.h);
    // adding (1/n) delta_m raises h by 1/n everywhere; thresholds
    // floor(b (h - A)) + 1 stay put once b/n is below the gap to the next integer
    Int n0 = 1;
    const Context& ctx = w.ctx();
    for (int E = 0; E < static_cast<int>(ctx.divisors().size()); ++E) {
        const auto& d = ctx.divisors()[E];
        Value hv = eval_potential(w, h.h, ctx.node_pos(E));
        Rat x = Rat(d.b) * (hv.v - d.A);
        Rat gap = Rat(floor_rat(x) + 1) - x;
        n0 = std::max(n0, Int(floor_rat(Rat(d.b) / gap) + 1));
    }
    long n = to_long(n0);
    o.detail = "n0 = " + std::to_string(n);
    auto at = [&](long k) {
        return multiplier_ideal_potential(w, add(w, h.h, make_potential(w, {{w.root(), rat(1, k)}})));
    };
    if (!same_ideal(at(n), J)) return fail(o, "J(h_n) differs from J(h) at n = " + std::to_string(n));
    if (!same_ideal(at(n + 7), J)) return fail(o, "J(h_n) differs from J(h) beyond n0");
    auto J1 = at(1);
    for (auto& g : J1.generators)
        if (!contains(J, g)) return fail(o, "J(h + delta_m) is not contained in J(h)");
    return o;
}

Outcome acc_case(Rng& r) {
    auto fac = random_factors(r);
    BivPoly psi(1);
    for (auto& [f, a] : fac) psi = psi * pow(f, a);
    Outcome o;
    for (auto& [f, a] : fac) o.input += "(" + to_string(f) + ")^" + std::to_string(a) + " ";
    o.size = ideal_size({psi});
    World w;
    size_t K = fac.size();
    std::vector<Valuation> curve(K), nu(K);
    std::vector<long> m(K);
    for (size_t k = 0; k < K; ++k) {
        curve[k] = w.curve(fac[k].first);
        if (w.degree(curve[k]) != 1) return fail(o, "branch is not rational");
        m[k] = mult_at_origin(fac[k].first);
        if (m[k] == 1) {
            nu[k] = curve[k];
        } else {
            auto prof = w.segment_profile(curve[k]);
            nu[k] = w.quasimonomial(fac[k].first, prof.breakpoints.at(1).first);
            if (w.multiplicity_of(nu[k]) != 1) return fail(o, "nu_k has multiplicity above one");
        }
    }
    // g_psi = sum a_k g_phi_k; avoids refactoring the product
    TreePotential h;
    for (auto& [f, a] : fac) h = add(w, h, scale(w, tree_transform_poly(w, f), a));
    Rat sup = chi_max(w, h, BivPoly(1)).sup;
    Rat best = 0;
    std::vector<std::pair<Valuation, Rat>> meets;
    for (size_t k = 0; k < K; ++k)
        for (size_t l = k; l < K; ++l) {
            Valuation v = w.meet(nu[k], nu[l]);
            Value al = w.alpha(v);
            std::string at = " at nu_" + std::to_string(k) + std::to_string(l);
            Rat chi;
            if (!al.inf) {
                if (!is_integer(al.v * m[k]) && !is_integer(al.v * m[l])) return fail(o, "fact 1 fails" + at);
                Rat val = 0;
                for (auto& [f, a] : fac) val += a * w.eval(v, f).v;
                if (!(val > 0) || (!is_integer(val * m[k]) && !is_integer(val * m[l])))
                    return fail(o, "fact 3 fails" + at);
                chi = val / w.thinness(v).v;
            } else {
                chi = fac[k].second;  // smooth branch: chi tends to its exponent
            }
            best = std::max(best, chi);
            meets.push_back({v, chi});
        }
    if (best != sup) return fail(o, "fact 2 fails: sup " + to_string(sup) + ", best meet " + to_string(best));
    for (auto& [v, chi] : meets) {
        if (chi != sup) continue;
        Rat lhs = 0, rhs = 0;
        for (size_t i = 0; i < K; ++i) {
            if (w.leq(v, curve[i]))
                rhs += fac[i].second * m[i];
            else
                lhs += fac[i].second * w.eval(v, fac[i].first).v;
        }
        if (lhs > rhs) return fail(o, "fact 4 fails: " + to_string(lhs) + " > " + to_string(rhs));
    }
    return o;
}

Outcome family_case(int n, int span) {
    Outcome o;
    o.input = "y^" + std::to_string(n) + " + x^m";
    World w;
    Rat prev = 0;
    for (int mm = n + 1; mm <= n + span; ++mm) {
        if (std::gcd(n, mm) != 1) continue;
        Rat lam = arnold(w, tree_transform_poly(w, pow(Y, n) + pow(X, mm)));
        // D - E / (1 + alpha) with D = E = n, alpha = m / n
        Rat closed = Rat(n) - Rat(n) / (1 + rat(mm, n));
        if (lam != closed) return fail(o, "lambda differs from the closed form at m = " + std::to_string(mm));
        if (!(lam > prev) || !(lam < n)) return fail(o, "family not strictly increasing below n at m = " + std::to_string(mm));
        prev = lam;
    }
    return o;
}

}  // namespace

std::vector<BivPoly> random_small_ideal(std::uint64_t seed) {
    Rng r = case_rng(seed, 100, 0);
    return ideal_from(r);
}

BivPoly random_reducible(std::uint64_t seed) {
    Rng r = case_rng(seed, 101, 0);
    BivPoly psi(1);
    for (auto& [f, a] : random_factors(r)) psi = psi * pow(f, a);
    return psi;
}

bool HarnessReport::ok() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.ok(); });
}

const SuiteReport* HarnessReport::find(const std::string& name) const {
    for (auto& s : suites)
        if (s.name == name) return &s;
    return nullptr;
}

std::string HarnessReport::json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["ok"] = ok();
    j["suites"] = nlohmann::json::array();
    for (auto& s : suites) {
        nlohmann::json e{{"name", s.name}, {"cases", s.cases}, {"passed", s.passed}};
        if (!s.ok()) e["counterexample"] = {{"input", s.counterexample}, {"detail", s.detail}};
        j["suites"].push_back(e);
    }
    return j.dump(2);
}

std::string HarnessReport::text() const {
    std::ostringstream os;
    os << "seed " << seed << "\n";
    for (auto& s : suites) {
        os << (s.ok() ? "pass " : "FAIL ") << s.name << " " << s.passed << "/" << s.cases << "\n";
        if (!s.ok()) os << "  counterexample: " << s.counterexample << "\n  " << s.detail << "\n";
    }
    return os.str();
}

HarnessReport property_harness(std::uint64_t seed, const HarnessSizes& sz) {
    HarnessReport rep;
    rep.seed = seed;
    int workers = sz.workers > 0 ? sz.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto suite = [&](const char* name, unsigned tag, int cases, const CaseFn& fn) {
        if (cases > 0) rep.suites.push_back(run_suite(name, tag, cases, seed, workers, fn));
    };
    suite("two-path", 1, sz.two_path, [](Rng& r, int i) { return two_path_case(r, i); });
    suite("lipman", 2, sz.lipman, [](Rng& r, int) { return lipman_case(r); });
    suite("subadditivity", 3, sz.subadditivity, [](Rng& r, int) { return subadditivity_case(r); });
    suite("skoda-curve", 4, sz.skoda_curve, [](Rng& r, int i) { return skoda_curve_case(r, i); });
    int si = sz.skoda_ideal;
    suite("skoda-ideal", 5, 2 * si, [si](Rng& r, int i) { return skoda_ideal_case(r, i % si, i >= si); });
    suite("semicontinuity", 6, sz.semicontinuity, [](Rng& r, int) { return semicontinuity_case(r); });
    suite("acc-facts", 7, sz.acc, [](Rng& r, int) { return acc_case(r); });
    int span = sz.family;
    suite("acc-family", 8, sz.family > 0 ? 3 : 0, [span](Rng&, int i) { return family_case(2 + i, span); });
    return rep;
}

}  // namespace valmult
