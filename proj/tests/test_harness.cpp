#include "doctest.h"
#include "valmult/harness.hpp"

using namespace valmult;

TEST_CASE("harness examples") {
    World w;
    // Skoda with h = 0 and phi = x
    auto Jx = multiplier_ideal_potential(w, tree_transform_poly(w, parse_poly("x")));
    CHECK(same_ideal(Jx, times(integral_closure(IdealPresentation({parse_poly("1")})), parse_poly("x"))));
    // J(2 g_m) = m J(g_m) = m
    auto gm = tree_transform_ideal(w, {parse_poly("x"), parse_poly("y")});
    auto J2 = multiplier_ideal_potential(w, scale(w, gm, 2));
    CHECK(same_ideal(J2, integral_closure(IdealPresentation({parse_poly("x"), parse_poly("y")}))));
    CHECK(multiplier_ideal_potential(w, gm).is_unit());
}

TEST_CASE("small seeded harness run") {
    HarnessSizes sz;
    sz.two_path = 6;
    sz.lipman = 4;
    sz.subadditivity = 4;
    sz.skoda_curve = 4;
    sz.skoda_ideal = 2;
    sz.semicontinuity = 4;
    sz.acc = 6;
    sz.family = 8;
    auto rep = property_harness(1, sz);
    INFO(rep.text());
    CHECK(rep.ok());
    CHECK(rep.suites.size() == 8);
    // same seed, same report
    auto again = property_harness(1, sz);
    CHECK(again.json() == rep.json());
    sz.workers = 1;
    CHECK(property_harness(1, sz).json() == rep.json());
}

TEST_CASE("random generators are deterministic") {
    CHECK(random_small_ideal(7) == random_small_ideal(7));
    CHECK(random_reducible(3) == random_reducible(3));
    CHECK(mult_at_origin(random_reducible(3)) >= 2);
}
