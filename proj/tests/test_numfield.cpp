#include "doctest.h"
#include "valmult/numfield.hpp"

using namespace valmult;

namespace {
UPoly P(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return UPoly(v);
}
}  // namespace

TEST_CASE("number field arithmetic") {
    FieldPtr K = make_field(P({-2, 0, 1}));
    Alg t = Alg::gen(K);
    CHECK(t * t == Alg(Rat(2)));
    Alg a = t + Alg(Rat(1));
    CHECK(a * a.inv() == Alg(Rat(1)));
    CHECK(a.norm() == Rat(-1));
    CHECK(a.trace() == Rat(2));
}

TEST_CASE("factorization over extensions") {
    FieldPtr K = make_field(P({-2, 0, 1}));
    SUBCASE("splits") {
        auto fs = factor_over(KPoly::from_upoly(K, P({-2, 0, 1})));
        CHECK(fs.size() == 2);
        for (auto& f : fs) CHECK(f.factor.deg() == 1);
    }
    SUBCASE("stays irreducible and builds a degree-4 field") {
        auto fs = factor_over(KPoly::from_upoly(K, P({-3, 0, 1})));
        REQUIRE(fs.size() == 1);
        CHECK(field_degree(fs[0].L) == 4);
        CHECK(fs[0].factor.map(fs[0].embed).eval(fs[0].root).is_zero());
    }
    SUBCASE("quartic over Q(i)") {
        FieldPtr Ki = make_field(P({1, 0, 1}));
        auto fs = factor_over(KPoly::from_upoly(Ki, P({1, 0, 0, 0, 1})));
        CHECK(fs.size() == 2);
        for (auto& f : fs) CHECK(f.factor.deg() == 2);
    }
    SUBCASE("multiplicities") {
        KPoly p = KPoly::from_upoly(K, P({-2, 0, 1}));
        auto fs = factor_over(p * p * KPoly::from_upoly(K, P({1, 1})));
        int total = 0;
        for (auto& f : fs) total += f.multiplicity * f.factor.deg();
        CHECK(total == 5);
    }
    SUBCASE("over Q") {
        auto fs = factor_over(KPoly::from_upoly(nullptr, P({-2, 0, 1}) * P({-1, 1})));
        CHECK(fs.size() == 2);
    }
}
