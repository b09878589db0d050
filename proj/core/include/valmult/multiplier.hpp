#pragma once

#include "valmult/potential.hpp"

#include <memory>
#include <string>
#include <vector>

namespace valmult {

// Product of ideals, each raised to a power: prod (gens_i)^{n_i}.
struct IdealFactor {
    std::vector<BivPoly> gens;
    int n = 1;
};
struct IdealPresentation {
    std::vector<IdealFactor> factors;
    IdealPresentation() = default;
    IdealPresentation(std::vector<BivPoly> gens) { factors.push_back({std::move(gens), 1}); }
};

struct DivisorCondition {
    int divisor = 0;
    long threshold = 0;  // ord_E(psi / principal) >= threshold
};
struct CurveCondition {
    BivPoly curve;
    long exponent = 0;
};

// An ideal of the local ring at the origin written as principal * J with J
// primary and cut out by divisorial conditions. m^N is contained in J.
struct MultiplierIdealResult {
    std::vector<BivPoly> generators;
    int containment_order = 0;
    BivPoly principal = BivPoly(1);
    std::vector<DivisorCondition> conditions;
    std::vector<CurveCondition> curve_conditions;
    std::shared_ptr<Context> ctx;
    std::string provenance;
    bool is_unit() const;
};

bool contains(const MultiplierIdealResult& J, const BivPoly& psi);
bool same_ideal(const MultiplierIdealResult& a, const MultiplierIdealResult& b);
// J * phi with the same conditions.
MultiplierIdealResult times(const MultiplierIdealResult& J, const BivPoly& phi);

// Ideal {psi : ord_E(psi) >= k_E} of polynomials; conditions are on the primary part.
MultiplierIdealResult ideal_from_conditions(std::shared_ptr<Context> ctx, const BivPoly& principal,
                                            std::vector<DivisorCondition> conditions, std::string provenance);

MultiplierIdealResult integral_closure(const IdealPresentation& I, long max_blowups = 4000);

// psi in J(h) via the sup of chi; psi = 0 gives false.
bool membership(World& w, const BivPoly& psi, const TreePotential& h);

MultiplierIdealResult multiplier_ideal_resolution(const IdealPresentation& I, const Rat& c, long max_blowups = 4000);
// Same formula with every divisor extended by `extra` free blowups (intersection over more divisors).
MultiplierIdealResult multiplier_ideal_lipman(const IdealPresentation& I, const Rat& c, int extra, long max_blowups = 4000);
MultiplierIdealResult multiplier_ideal_potential(World& w, const TreePotential& h, bool verify = true);

Rat arnold(World& w, const TreePotential& h);
Rat lct(World& w, const TreePotential& h);
Rat lct(const IdealPresentation& I, long max_blowups = 4000);
Rat lct(const BivPoly& f, long max_blowups = 4000);

// Values c in (0, upto] where J(I^c) drops, scanning the candidates j / r_E and j / n_C.
std::vector<Rat> jumping_numbers(const IdealPresentation& I, const Rat& upto, long max_blowups = 4000);

struct ArnoldBounds {
    Rat lambda, total, max_direction;
    bool bounds = false, half_iff = false, top_iff = false;
    bool ok() const { return bounds && half_iff && top_iff; }
};
ArnoldBounds arnold_bounds_check(World& w, const TreePotential& h);

struct ReesFactor {
    Valuation v;
    int divisor = 0;
    int n = 1;
    long b = 1;
    int degree = 1;
};
struct ZariskiData {
    BivPoly principal = BivPoly(1);
    std::vector<ReesFactor> rees;
};
ZariskiData zariski_factor(World& w, const std::vector<BivPoly>& gens);
IdealPresentation reexpand(World& w, const ZariskiData& z);

// {psi : v(psi) >= s} for a divisorial (or rational quasimonomial) v.
MultiplierIdealResult valuation_ideal(World& w, const Valuation& v, const Rat& s);

enum class GradedKind { Valuation, Power };
struct GradedSystem {
    GradedKind kind = GradedKind::Power;
    Valuation v;                 // valuation system I_k = {v >= k}
    std::vector<BivPoly> ideal;  // power system I_k = I^k for k >= k0
    int k0 = 1;
};
struct GradedResult {
    TreePotential g;
    MultiplierIdealResult J;
    Rat lct;
};
GradedResult graded_asymptotic(World& w, const GradedSystem& G, const Rat& c);

TreePotential inverse_problem(World& w, const std::vector<BivPoly>& gens);

struct SandwichReport {
    TreePotential ht;
    MultiplierIdealResult J;
    long points = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
SandwichReport equisingular_approx(World& w, const TreePotential& h, const Rat& t);

std::string result_json(const MultiplierIdealResult& J);

}  // namespace valmult
