#include "doctest.h"
#include "valmult/bivpoly.hpp"

#include <random>

using namespace valmult;

namespace {
BivPoly P(const char* s) { return parse_poly(s); }

// Fulton's algorithm for dim O/(f,g) at the origin, written without resultants.
long fulton(BivPoly f, BivPoly g, int depth = 0) {
    if (depth > 2000) throw std::runtime_error("fulton recursion");
    if (f.is_zero() || g.is_zero()) return -1;
    if (f.constant_term() != 0 || g.constant_term() != 0) return 0;
    auto at_y0 = [](const BivPoly& p) {
        UPoly r;
        for (auto& [m, c] : p.terms)
            if (m.second == 0) r += UPoly::monomial(c, m.first);
        return r;
    };
    UPoly r = at_y0(f), s = at_y0(g);
    if (r.deg() > s.deg() || (s.is_zero() && !r.is_zero())) {
        std::swap(f, g);
        std::swap(r, s);
    }
    if (r.is_zero()) {
        // y | f : f = y*q ; I(f,g) = I(y,g) + I(q,g); I(y,g) = ord of g(x,0)
        BivPoly q = exact_div(f, BivPoly::y());
        if (s.is_zero()) return -1;
        long a = s.ord();
        long b = fulton(q, g, depth + 1);
        return b < 0 ? -1 : a + b;
    }
    // both nonzero, deg r <= deg s: reduce g
    BivPoly g2 = g * r.lc() - f * s.lc() * BivPoly::monomial(1, s.deg() - r.deg(), 0);
    return fulton(f, g2, depth + 1);
}

BivPoly random_poly(std::mt19937& rng, int maxdeg) {
    std::uniform_int_distribution<int> co(-3, 3), dg(1, maxdeg);
    BivPoly p;
    int d = dg(rng);
    for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j)
            if (i + j >= 1 && rng() % 3 == 0) p.add_term(i, j, co(rng));
    if (p.is_zero()) p = BivPoly::x();
    return p;
}
}  // namespace

TEST_CASE("parser and canonical serialization") {
    CHECK(P("x") == BivPoly::x());
    CHECK(P("y^2 - x^3") == BivPoly::monomial(1, 0, 2) - BivPoly::monomial(1, 3, 0));
    CHECK(P("1/2*x*y + y^2") == BivPoly::monomial(Rat(1, 2), 1, 1) + BivPoly::monomial(1, 0, 2));
    CHECK(to_string(P("y^2 - x^3")) == "-x^3 + y^2");
    CHECK(to_string(P("(x+y)^2")) == "x^2 + 2*x*y + y^2");
    CHECK(to_string(P("-2/4*x + 0*y")) == "-1/2*x");
    for (const char* s : {"y^2-x^3", "1/2*x*y+y^2", "-(x - 3/7*y)^3*y + 5", "0", "x*y*(1+x)^2"}) {
        BivPoly p = P(s);
        CHECK(P(to_string(p).c_str()) == p);
        CHECK(to_string(P(to_string(p).c_str())) == to_string(p));
    }
}

TEST_CASE("parser errors carry byte offsets") {
    auto offset_of = [](const char* s) -> long {
        try {
            parse_poly(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset);
        }
        return -1;
    };
    CHECK(offset_of("2x") == 1);        // implicit multiplication
    CHECK(offset_of("x + ") == 4);
    CHECK(offset_of("x^1/2") == 3);     // division inside exponent
    CHECK(offset_of("x^/2") == 2);
    CHECK(offset_of("x^99999999") == 2);  // overflow
    CHECK(offset_of("(x+y") == 4);
    CHECK(offset_of("x/y") == 1);
    CHECK(offset_of("3/0") == 2);
    CHECK_THROWS_AS(parse_poly("x^-1"), ParseError);
}

TEST_CASE("multiplicity at the origin") {
    CHECK(mult_at_origin(P("x")) == 1);
    CHECK(mult_at_origin(P("y^2-x^3")) == 2);
    CHECK(mult_at_origin(P("1+x")) == 0);
    CHECK_THROWS_AS(mult_at_origin(BivPoly()), DomainError);
}

TEST_CASE("resultant eliminating y") {
    // Sylvester matrix rows of p first
    CHECK(resultant_elim_y(P("y-x"), P("y+x")) == UPoly(std::vector<Rat>{0, 2}));
    UPoly r = resultant_elim_y(P("y^2-x^3"), P("y"));
    CHECK(r == UPoly::monomial(-1, 3));  // sign fixed by the row convention
    CHECK(resultant_elim_y(P("y"), P("y")).is_zero());
    CHECK_THROWS_AS(resultant_elim_y(P("x"), P("y")), DomainError);
}

TEST_CASE("intersection multiplicity examples") {
    CHECK(intersection_multiplicity(P("y"), P("x")) == Value(1));
    CHECK(intersection_multiplicity(P("y"), P("y^2-x^3")) == Value(3));
    CHECK(intersection_multiplicity(P("y^2-x^3"), P("y^2-x^5")) == Value(6));
    CHECK(intersection_multiplicity(P("y^2-x^2"), P("y-x")) == Value::infinity());
    CHECK(intersection_multiplicity(P("y*(1+x)"), P("y^2-x^3")) == Value(3));
    CHECK(intersection_multiplicity_ex(P("x^2-y^3"), P("x^2+y^5")).shear >= 0);
    CHECK_THROWS_AS(intersection_multiplicity(P("1+x"), P("y")), DomainError);
}

TEST_CASE("intersection multiplicity properties against Fulton's algorithm") {
    std::mt19937 rng(7);
    int checked = 0;
    for (int it = 0; it < 60; ++it) {
        BivPoly p = random_poly(rng, 3), q = random_poly(rng, 3), r = random_poly(rng, 3);
        Value ipq = intersection_multiplicity(p, q);
        CHECK(ipq == intersection_multiplicity(q, p));
        if (ipq.inf) {
            CHECK(!gcd(p, q).is_constant());
            continue;
        }
        long f = fulton(p, q);
        CHECK(Rat(f) == ipq.v);
        CHECK(ipq.v >= Rat(mult_at_origin(p) * mult_at_origin(q)));
        bool common_tangent = !gcd(p.lowest_form(), q.lowest_form()).is_constant();
        CHECK((ipq.v == Rat(mult_at_origin(p) * mult_at_origin(q))) == !common_tangent);
        Value a = intersection_multiplicity(p * q, r), b = intersection_multiplicity(p, r),
              c = intersection_multiplicity(q, r);
        if (!a.inf && !b.inf && !c.inf) CHECK(a == b + c);
        CHECK(mult_at_origin(p * q) == mult_at_origin(p) + mult_at_origin(q));
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("gcd, squarefree part and coprime base") {
    BivPoly a = P("(y^2-x^3)*(x+y)"), b = P("(y^2-x^3)*(x-y)^2");
    CHECK(gcd(a, b) == normalize(P("y^2-x^3")));
    CHECK(squarefree_part(P("(y-x)^3*(y+x)")) == normalize(P("(y-x)*(y+x)")));
    auto fb = coprime_base({a, b});
    CHECK(fb.base.size() == 3);
    BivPoly prod(1);
    for (size_t i = 0; i < fb.base.size(); ++i) prod = prod * pow(fb.base[i], fb.exponents[1][i]);
    CHECK(normalize(prod) == normalize(b));
}
