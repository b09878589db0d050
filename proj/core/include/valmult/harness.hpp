#pragma once

#include "valmult/multiplier.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace valmult {

// Number of random cases per suite; zero skips a suite.
struct HarnessSizes {
    int two_path = 50;     // each case runs c = 1/2, 1, 3/2
    int lipman = 20;
    int subadditivity = 30;
    int skoda_curve = 20;  // J(h + g_phi) = phi J(h)
    int skoda_ideal = 5;   // per base valuation
    int semicontinuity = 30;
    int acc = 30;
    int family = 20;       // terms per family, n = 2, 3, 4
    int workers = 0;       // 0: hardware concurrency
};

struct SuiteReport {
    std::string name;
    int cases = 0;
    int passed = 0;
    // smallest failing case (by input size) and what went wrong
    std::string counterexample;
    std::string detail;
    bool ok() const { return passed == cases; }
};

struct HarnessReport {
    std::uint64_t seed = 0;
    std::vector<SuiteReport> suites;
    bool ok() const;
    const SuiteReport* find(const std::string& name) const;
    std::string json() const;
    std::string text() const;
};

HarnessReport property_harness(std::uint64_t seed, const HarnessSizes& sizes = {});

// Random generators shared with the acceptance runner.
std::vector<BivPoly> random_small_ideal(std::uint64_t seed);
BivPoly random_reducible(std::uint64_t seed);

}  // namespace valmult
