#include "doctest.h"
#include "valmult/blowup.hpp"

#include <random>
#include <set>

using namespace valmult;

namespace {
BivPoly P(const char* s) { return parse_poly(s); }

std::vector<BivPoly> ideal(std::initializer_list<const char*> gs) {
    std::vector<BivPoly> r;
    for (auto g : gs) r.push_back(P(g));
    return r;
}

void check_divisor_invariants(Context& c) {
    for (auto& d : c.divisors()) {
        long bx = c.divisor_value(d.id, BivPoly::x()), by = c.divisor_value(d.id, BivPoly::y());
        CHECK(std::min(bx, by) == d.b);
        CHECK(d.cluster_mults.front() == d.b);
        Rat s = 0;
        for (long m : d.cluster_mults) s += Rat(m * m);
        CHECK(d.alpha == s / Rat(d.b * d.b));
        CHECK(d.A == rat(d.a, d.b));
        CHECK(d.A >= 1 + d.alpha);
        // thinness along the path agrees with a/b
        CHECK(c.thinness(c.node_pos(d.id)) == d.A);
        if (d.parent >= 0) {
            CHECK(c.edge_mult(d.id) % c.multiplicity(c.node_pos(d.parent)) == 0);
            CHECK(c.divisors()[d.parent].alpha < d.alpha);
        }
        CHECK((d.A == 1 + d.alpha) == (c.multiplicity(c.node_pos(d.id)) == 1));
    }
}

BivPoly random_curve(std::mt19937& rng) {
    std::uniform_int_distribution<int> co(-3, 3), deg(1, 5), nt(2, 4);
    for (;;) {
        BivPoly f;
        int n = nt(rng);
        for (int k = 0; k < n; ++k) {
            int d = deg(rng);
            std::uniform_int_distribution<int> ii(0, d);
            int i = ii(rng);
            f.add_term(i, d - i, Rat(co(rng)));
        }
        if (f.is_zero() || f.constant_term() != 0) continue;
        if (squarefree_part(f).total_degree() != f.total_degree()) continue;
        return f;
    }
}
}  // namespace

TEST_CASE("chart substitutions") {
    KPoly2 f = KPoly2::from_biv(nullptr, P("y^2 - x^3"));
    CHECK(to_string(f.chart1(Alg(Rat(0))).div_u(2)) == to_string(KPoly2::from_biv(nullptr, P("y^2 - x"))));
    KPoly2 g = f.chart2();  // v^2 - u^3 v^3
    CHECK(g.ord_v() == 2);
    CHECK(g.coeff(3, 3) == Alg(Rat(-1)));
    KPoly2 X = KPoly2::from_biv(nullptr, P("x*y")), Y = KPoly2::from_biv(nullptr, P("y"));
    KPoly2 s = substitute_trunc(P("y^2 - x^3"), X, Y, 20);
    CHECK(s == KPoly2::from_biv(nullptr, P("y^2 - x^3*y^3")));
    CHECK(substitute_trunc(P("y^2 - x^3"), X, Y, 3).order() == 2);
}

TEST_CASE("resolution of the maximal ideal") {
    auto t = log_resolution(ideal({"x", "y"}));
    REQUIRE(t.ctx->divisors().size() == 1);
    auto& d = t.ctx->divisors()[0];
    CHECK(d.a == 2);
    CHECK(d.b == 1);
    CHECK(d.alpha == 1);
    CHECK(d.A == 2);
    CHECK(t.r[0] == 1);
    CHECK(divisor_value(t, 0, P("x")) == 1);
}

TEST_CASE("cusp resolution") {
    auto t = log_resolution(ideal({"y^2 - x^3"}));
    auto& D = t.ctx->divisors();
    REQUIRE(D.size() == 3);
    std::vector<std::pair<long, long>> ab;
    for (auto& d : D) ab.push_back({d.a, d.b});
    CHECK(ab == std::vector<std::pair<long, long>>{{2, 1}, {3, 1}, {5, 2}});
    CHECK(t.r == std::vector<long>{2, 3, 6});
    CHECK(t.ctx->ends().size() == 1);
    CHECK(t.ctx->end_divisor(0) == 2);
    CHECK(D[2].alpha == rat(3, 2));
    CHECK(D[2].satellite);
    CHECK(D[2].parent == 0);
    CHECK(D[1].parent == 2);
    CHECK(divisor_value(t, 2, P("y^2 - x^3")) == 6);
    CHECK(divisor_value(t, 2, P("x")) == 2);
    CHECK(divisor_value(t, 2, P("y")) == 3);
    CHECK_THROWS_AS(divisor_value(t, 2, BivPoly()), DomainError);
    check_divisor_invariants(*t.ctx);
    auto js = resolution_json(t);
    CHECK(js.find("\"edges\"") != std::string::npos);
    CHECK(js == resolution_json(log_resolution(ideal({"y^2 - x^3"}))));
}

TEST_CASE("free point extensions") {
    auto t = log_resolution(ideal({"x", "y"}));
    int E = extend_with_free_points(t, 0, 1);
    auto& d = t.ctx->divisors()[E];
    CHECK(d.a == 3);
    CHECK(d.b == 1);
    CHECK(d.A == 3);
    // the first free point on the root divisor is the direction of the x-axis
    CHECK(divisor_value(t, E, P("x")) == 1);
    CHECK(divisor_value(t, E, P("y")) == 2);

    auto c = log_resolution(ideal({"y^2 - x^3"}));
    int F = extend_with_free_points(c, 2, 1);
    CHECK(c.ctx->divisors()[F].a == 6);
    CHECK(c.ctx->divisors()[F].b == 2);
    CHECK(c.ctx->divisors()[F].A == 3);

    auto t1 = log_resolution(ideal({"y^2 - x^3"}));
    auto t2 = log_resolution(ideal({"y^2 - x^3"}));
    int e1 = extend_with_free_points(t1, extend_with_free_points(t1, 2, 2), 3);
    int e2 = extend_with_free_points(t2, 2, 5);
    CHECK(t1.ctx->divisors()[e1].a == t2.ctx->divisors()[e2].a);
    CHECK(t1.ctx->divisors()[e1].b == t2.ctx->divisors()[e2].b);
    CHECK(t1.ctx->divisors()[e1].alpha == t2.ctx->divisors()[e2].alpha);
    CHECK(t2.ctx->divisors()[e2].A == rat(5, 2) + rat(5, 2));
    check_divisor_invariants(*t2.ctx);
}

TEST_CASE("monomial ideals match the toric picture") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> e(0, 7);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<BivPoly> gens;
        std::vector<std::pair<int, int>> ex;
        int n = 1 + trial % 4;
        for (int k = 0; k < n; ++k) {
            int i = e(rng), j = e(rng);
            if (i + j == 0) i = 1;
            ex.push_back({i, j});
            gens.push_back(BivPoly::monomial(1, i, j));
        }
        auto t = log_resolution(gens);
        std::set<std::pair<long, long>> rays;
        for (auto& d : t.ctx->divisors()) {
            long p = divisor_value(t, d.id, BivPoly::x()), q = divisor_value(t, d.id, BivPoly::y());
            CHECK(d.a == p + q);
            long r = -1;
            for (auto [i, j] : ex) r = r < 0 ? i * p + j * q : std::min(r, i * p + j * q);
            CHECK(t.r[d.id] == r);
            rays.insert({p, q});
        }
        // every inner normal of the Newton polygon must be a divisor
        std::vector<std::pair<int, int>> pts = ex;
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); ++b) {
                auto [i1, j1] = pts[a];
                auto [i2, j2] = pts[b];
                if (!(i1 < i2 && j1 > j2)) continue;
                long p = j1 - j2, q = i2 - i1;
                long g = std::gcd(p, q);
                p /= g, q /= g;
                long v = long(i1) * p + long(j1) * q;
                bool facet = true;
                for (auto [i, j] : pts) facet = facet && long(i) * p + long(j) * q >= v;
                if (facet) CHECK(rays.count({p, q}) == 1);
            }
        check_divisor_invariants(*t.ctx);
    }
}

TEST_CASE("cusp family thresholds from a/r") {
    for (int k = 1; k <= 6; ++k) {
        BivPoly f = pow(BivPoly::y(), 2) - pow(BivPoly::x(), 2 * k + 1);
        auto t = log_resolution({f});
        Rat best = -1;
        for (auto& d : t.ctx->divisors()) {
            Rat v = rat(d.a, t.r[d.id]);
            if (best < 0 || v < best) best = v;
        }
        best = std::min(best, Rat(1));
        CHECK(best == rat(1, 2) + rat(1, 2 * k + 1));
    }
}

TEST_CASE("two-pair branch") {
    auto t = log_resolution({P("(y^2-x^3)^2 - x^5*y")});
    check_divisor_invariants(*t.ctx);
    CHECK(t.ctx->ends().size() == 1);
    int E = t.ctx->end_divisor(0);
    CHECK(t.ctx->divisors()[E].b == 4);
    CHECK(t.ctx->divisors()[E].alpha == rat(13, 8));
}

TEST_CASE("conjugate branches") {
    // two tangent lines defined over Q(sqrt 2)
    auto t = log_resolution({P("y^2 - 2*x^2")});
    CHECK(t.ctx->divisors().size() == 1);
    REQUIRE(t.ctx->ends().size() == 1);
    CHECK(t.ctx->ends()[0].degree == 2);
    auto u = log_resolution({P("y^2 - 2*x^2 - x^3"), P("x^2*y")});
    check_divisor_invariants(*u.ctx);
    // a degree 2 point blown up: (y^2 - 2 x^3 ...)
    auto v = log_resolution({P("(y - x^2)^2 - 2*x^5")});
    check_divisor_invariants(*v.ctx);
}

TEST_CASE("Noether pairing matches resultant intersection") {
    std::mt19937 rng(11);
    int done = 0;
    for (int trial = 0; trial < 200 && done < 40; ++trial) {
        BivPoly f = random_curve(rng), g = random_curve(rng);
        if (!gcd(f, g).is_constant()) continue;
        Context c(2000);
        int a = c.add_curve(f), b = c.add_curve(g);
        Value I = intersection_multiplicity(f, g);
        REQUIRE(I.finite());
        CHECK(Rat(noether_pairing(c, a, b)) == I.v);
        check_divisor_invariants(c);
        ++done;
    }
    CHECK(done >= 30);
    Context c(2000);
    int a = c.add_curve(P("y^2 - x^3")), b = c.add_curve(P("y^2 - x^5"));
    CHECK(noether_pairing(c, a, b) == 6);
}

TEST_CASE("blowup ceiling") {
    CHECK_THROWS_AS(log_resolution({P("y^2 - x^31")}, 5), ResourceError);
}

TEST_CASE("refinement realizes quasimonomial positions") {
    auto t = log_resolution({P("y")});
    Context& c = *t.ctx;
    int end = end_node(0);
    int E = c.realize(c.locate(end, rat(3, 2)));
    CHECK(c.divisors()[E].alpha == rat(3, 2));
    CHECK(c.divisor_value(E, P("y")) == 3);
    CHECK(c.divisor_value(E, P("x")) == 2);
    int F = c.realize(c.locate(end, rat(17, 5)));
    CHECK(c.divisors()[F].alpha == rat(17, 5));
    CHECK(c.divisor_value(F, P("x")) == 5);
    CHECK(c.divisor_value(F, P("y")) == 17);
    check_divisor_invariants(c);
}
