#include "doctest.h"
#include "valmult/valtree.hpp"

#include <random>

using namespace valmult;

namespace {
BivPoly P(const char* s) { return parse_poly(s); }

BivPoly random_poly(std::mt19937& rng, int maxdeg = 5) {
    std::uniform_int_distribution<int> co(-3, 3), deg(1, maxdeg), nt(1, 4);
    for (;;) {
        BivPoly f;
        int n = nt(rng);
        for (int k = 0; k < n; ++k) {
            int d = deg(rng);
            std::uniform_int_distribution<int> ii(0, d);
            int i = ii(rng);
            f.add_term(i, d - i, Rat(co(rng)));
        }
        if (!f.is_zero()) return f;
    }
}

// min over the support of i*wx + j*wy
Rat monomial_value(const BivPoly& f, const Rat& wx, const Rat& wy) {
    Rat best = -1;
    for (auto& [m, c] : f.terms) {
        Rat v = wx * m.first + wy * m.second;
        if (best < 0 || v < best) best = v;
    }
    return best;
}
}  // namespace

TEST_CASE("spec examples for meet, eval and compare") {
    World w;
    auto y = w.curve(P("y")), cusp = w.curve(P("y^2 - x^3"));
    auto m = w.meet(y, cusp);
    CHECK(w.same(m, w.quasimonomial(P("y"), rat(3, 2))));
    CHECK(w.alpha(m) == Value(rat(3, 2)));
    CHECK(w.eval(w.quasimonomial(P("y"), rat(3, 2)), P("y^2 - x^3")) == Value(3));
    CHECK(w.eval(y, P("y*(y^2 - x^3)")).inf);
    CHECK(w.eval_ideal(w.quasimonomial(P("y"), rat(3, 2)), {P("x^2"), P("y")}) == Value(rat(3, 2)));
    CHECK(w.eval_ideal(w.root(), {P("x"), P("y")}) == Value(1));
    CHECK(w.same(w.meet(y, y), y));
    CHECK(w.same(w.meet(w.root(), cusp), w.root()));
    CHECK(w.compare(w.root(), cusp) == Order::Less);
    CHECK(w.compare(w.quasimonomial(P("y"), rat(3, 2)), w.quasimonomial(P("y^2-x^3"), 2)) == Order::Less);
    CHECK(w.compare(w.quasimonomial(P("y"), 2), w.quasimonomial(P("x"), 2)) == Order::Incomparable);
    CHECK(w.compare(cusp, cusp) == Order::Equal);
    CHECK(w.same(w.quasimonomial(P("x"), 1), w.root()));
    CHECK_THROWS_AS(w.curve(P("y^2 - x^2")), DomainError);
    CHECK_THROWS_AS(w.eval(y, BivPoly()), DomainError);
    CHECK(w.eval(y, P("1 + x")) == Value(0));
}

TEST_CASE("divisorial valuations agree with divisor orders") {
    auto t = log_resolution({P("y^2 - x^3")});
    World w(t.ctx);
    auto E = w.divisorial(2);
    CHECK(w.eval(E, P("y^2 - x^3")) == Value(3));
    CHECK(w.thinness(E) == Value(rat(5, 2)));
    CHECK(w.same(E, w.quasimonomial(P("y^2-x^3"), rat(3, 2))));
    // same valuation seen from another world
    World u;
    auto F = u.divisorial(t, 2);
    CHECK(u.alpha(F) == Value(rat(3, 2)));
    CHECK(u.eval(F, P("y")) == Value(rat(3, 2)));
    CHECK(u.same(F, u.quasimonomial(P("y"), rat(3, 2))));
    auto G = u.parse("divisorial:y^2-x^3:2");
    CHECK(u.same(F, G));

    std::mt19937 rng(3);
    std::vector<BivPoly> corpus;
    for (int k = 0; k < 12; ++k) corpus.push_back(random_poly(rng));
    for (const char* gens : {"y^2 - x^3", "(y^2-x^3)^2 - x^5*y", "x^2*y - y^4", "y^2 - 2*x^2 - x^3"}) {
        auto r = log_resolution({P(gens)});
        World z(r.ctx);
        auto divs = r.ctx->divisors();  // the tree grows while evaluating
        for (auto& d : divs) {
            auto v = z.divisorial(d.id);
            CHECK(z.thinness(v) == Value(d.A));
            for (auto& f : corpus) {
                if (f.constant_term() != 0) continue;
                long dv = r.ctx->divisor_value(d.id, f);
                CHECK(z.eval(v, f) == Value(rat(dv, d.b)));
            }
        }
    }
}

TEST_CASE("segment profiles, thinness and multiplicity") {
    World w;
    auto py = w.segment_profile(P("y"));
    CHECK(py.breakpoints == std::vector<std::pair<Rat, long>>{{1, 1}});
    auto pc = w.segment_profile(P("y^2 - x^3"));
    CHECK(pc.breakpoints == std::vector<std::pair<Rat, long>>{{1, 1}, {rat(3, 2), 2}});
    auto p2 = w.segment_profile(P("(y^2-x^3)^2 - x^5*y"));
    CHECK(p2.breakpoints == std::vector<std::pair<Rat, long>>{{1, 1}, {rat(3, 2), 2}, {rat(13, 8), 4}});
    CHECK(to_string(pc) == "[[\"1\",1],[\"3/2\",2]]");

    CHECK(w.thinness(w.root()) == Value(2));
    CHECK(w.thinness(w.quasimonomial(P("y^2-x^3"), 2)) == Value(rat(7, 2)));
    CHECK(w.thinness(w.curve(P("y"))).inf);
    CHECK(w.multiplicity_of(w.root()) == 1);
    CHECK(w.multiplicity_of(w.quasimonomial(P("y^2-x^3"), rat(3, 2))) == 1);
    CHECK(w.multiplicity_of(w.quasimonomial(P("y^2-x^3"), rat(3, 2) + rat(1, 1000))) == 2);
    CHECK(w.multiplicity_of(w.curve(P("y^2-x^3"))) == 2);
    // thinness from the profile integral
    for (Rat t : {Rat(1), rat(5, 4), rat(3, 2), rat(8, 5), rat(7, 4), Rat(3)}) {
        auto v = w.quasimonomial(P("(y^2-x^3)^2 - x^5*y"), t);
        Rat A = 2;
        auto& bp = p2.breakpoints;
        for (size_t i = 0; i < bp.size(); ++i) {
            Rat hi = i + 1 < bp.size() ? std::min(t, bp[i + 1].first) : t;
            if (hi > bp[i].first) A += Rat(bp[i].second) * (hi - bp[i].first);
        }
        CHECK(w.thinness(v) == Value(A));
    }
}

TEST_CASE("smooth coordinate branches give monomial valuations") {
    std::mt19937 rng(5);
    World w;
    for (int k = 0; k < 40; ++k) {
        BivPoly f = random_poly(rng);
        if (f.constant_term() != 0) continue;
        Rat t = rat(1 + k % 7, 1 + k % 3) + 1;
        CHECK(w.eval(w.quasimonomial(P("y"), t), f) == Value(monomial_value(f, 1, t)));
        CHECK(w.eval(w.quasimonomial(P("x"), t), f) == Value(monomial_value(f, t, 1)));
        CHECK(w.eval(w.root(), f) == Value(mult_at_origin(f)));
    }
}

TEST_CASE("conjugate branches") {
    World w;
    auto v = w.quasimonomial(P("y^2 - 2*x^2"), rat(5, 2));
    CHECK(w.degree(v) == 2);
    CHECK(w.eval(v, P("y^2 - 2*x^2")) == Value(rat(7, 2)));
    CHECK(w.eval(v, P("y")) == Value(1));
    CHECK(w.eval(w.quasimonomial(P("y"), 3), P("y^2 - 2*x^2")) == Value(2));
    CHECK(w.eval(w.curve(P("y^2-2*x^2")), P("y^2-2*x^2")).inf);
}

TEST_CASE("valuation axioms and concavity on random data") {
    std::mt19937 rng(9);
    World w;
    std::vector<const char*> branches = {"y", "x", "y^2 - x^3", "y^2 - x^5", "(y^2-x^3)^2 - x^5*y", "y - x^2", "x^2 - y^3", "y^3 - x^7"};
    std::vector<Valuation> vals{w.root()};
    for (auto b : branches)
        for (Rat t : {rat(3, 2), Rat(2), rat(13, 8), rat(7, 3)}) vals.push_back(w.quasimonomial(P(b), t));
    for (int k = 0; k < 30; ++k) {
        BivPoly f = random_poly(rng), g = random_poly(rng);
        if (f.constant_term() != 0 || g.constant_term() != 0) continue;
        for (auto& v : vals) {
            Value a = w.eval(v, f), b = w.eval(v, g);
            CHECK(w.eval(v, f * g) == a + b);
            if (!(f + g).is_zero()) CHECK(std::min(a, b) <= w.eval(v, f + g));
        }
    }
    for (auto& v : vals) {
        Rat al = w.alpha(v).v, A = w.thinness(v).v;
        CHECK(A >= 1 + al);
        CHECK((A == 1 + al) == (w.multiplicity_of(v) == 1));
        CHECK(std::min(w.eval(v, P("x")), w.eval(v, P("y"))) == Value(1));
    }
    // t -> v_{B,t}(p) is concave with integral slopes
    for (auto b : branches) {
        BivPoly p = P("(y^2 - x^3)*(y - x^2)*x");
        Rat prev_slope = -1, prev = 0;
        for (int k = 0; k <= 24; ++k) {
            Rat t = 1 + rat(k, 8);
            Rat val = w.eval(w.quasimonomial(P(b), t), p).v;
            if (k > 0) {
                Rat s = (val - prev) * 8;
                if (prev_slope >= 0) CHECK(s <= prev_slope);
                prev_slope = s;
            }
            prev = val;
        }
    }
}

TEST_CASE("valuation literals and json") {
    World w;
    auto v = w.parse("quasimonomial:y:3/2");
    CHECK(w.eval(v, P("y^2-x^3")) == Value(3));
    CHECK(w.json(v) == "{\"branch\":\"y\",\"kind\":\"quasimonomial\",\"t\":\"3/2\"}");
    CHECK(w.same(w.parse("m"), w.root()));
    CHECK(w.parse("curve:y^2-x^3").kind == ValKind::Curve);
    CHECK_THROWS_AS(w.parse("bogus"), DomainError);
    CHECK_THROWS_AS(w.parse("quasimonomial:y:1/2"), DomainError);
}
