#include "valmult/branch.hpp"
#include "valmult/harness.hpp"

#include <benchmark/benchmark.h>

using namespace valmult;

static void BM_LogResolution(benchmark::State& st) {
    BivPoly f = pow(BivPoly::y(), 2) - pow(BivPoly::x(), static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(log_resolution({f}).r.size());
}
BENCHMARK(BM_LogResolution)->Arg(3)->Arg(7)->Arg(15)->Arg(31);

static void BM_Arnold(benchmark::State& st) {
    int n = static_cast<int>(st.range(0));
    BivPoly f = pow(BivPoly::y(), n) + pow(BivPoly::x(), n + 1);
    for (auto _ : st) {
        World w;
        benchmark::DoNotOptimize(arnold(w, tree_transform_poly(w, f)));
    }
}
BENCHMARK(BM_Arnold)->DenseRange(2, 8, 2);

// both paths on (x^a, y^b)^(3/2)
static void BM_MultiplierResolution(benchmark::State& st) {
    IdealPresentation I({BivPoly::monomial(1, static_cast<int>(st.range(0)), 0), BivPoly::monomial(1, 0, static_cast<int>(st.range(1)))});
    for (auto _ : st) benchmark::DoNotOptimize(multiplier_ideal_resolution(I, Rat(3, 2)).generators.size());
}
BENCHMARK(BM_MultiplierResolution)->Args({2, 3})->Args({3, 5})->Args({5, 7});

static void BM_MultiplierPotential(benchmark::State& st) {
    std::vector<BivPoly> g{BivPoly::monomial(1, static_cast<int>(st.range(0)), 0), BivPoly::monomial(1, 0, static_cast<int>(st.range(1)))};
    for (auto _ : st) {
        World w;
        benchmark::DoNotOptimize(multiplier_ideal_potential(w, scale(w, tree_transform_ideal(w, g), Rat(3, 2))).generators.size());
    }
}
BENCHMARK(BM_MultiplierPotential)->Args({2, 3})->Args({3, 5})->Args({5, 7});

static void BM_Factorization(benchmark::State& st) {
    BivPoly f = parse_poly("(y^2 - x^3) * (y^2 + x^3) * (y - x^2) * (x^2 - y^5)");
    for (auto _ : st) benchmark::DoNotOptimize(puiseux_branches(f).size());
}
BENCHMARK(BM_Factorization);

static void BM_Harness(benchmark::State& st) {
    HarnessSizes sz;
    sz.workers = 1;
    for (auto _ : st) benchmark::DoNotOptimize(property_harness(1, sz).ok());
}
BENCHMARK(BM_Harness)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
