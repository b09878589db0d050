#pragma once

#include "valmult/kpoly2.hpp"

#include <memory>
#include <string>
#include <vector>

namespace valmult {

// One step of the Newton-Puiseux recursion: an edge of slope q/p and an
// irreducible factor of its characteristic polynomial. `zero` marks the
// exact branch Y = 0 at that stage.
struct PuiseuxStep {
    int edge = 0, factor = 0;
    int p = 1, q = 0;
    Rat exponent;  // exponent of x contributed at this step
    bool zero = false;
};

struct PuiseuxLeaf;

// A closed branch at the origin: a Galois orbit of `degree` geometric branches.
// Coordinates are sheared (x -> x + shear*y) so that no branch is tangent to
// x = 0; then x = gamma*s^m and y = sum series[k] s^k with coefficients in K.
struct Branch {
    BivPoly defining_factor;  // squarefree factor of the input vanishing on the branch
    int multiplicity_in_input = 1;
    int shear = 0;
    int m = 1;
    int degree = 1;
    FieldPtr K;
    Alg gamma;
    std::vector<Alg> series;  // dense in s, exact below series.size()
    std::vector<Rat> char_exponents;
    std::vector<PuiseuxStep> path;
    int call = 0;   // decomposition this branch belongs to
    int index = 0;  // position within the decomposition
    std::shared_ptr<const PuiseuxLeaf> leaf;

    int truncation() const { return static_cast<int>(series.size()); }
};

struct BranchOptions {
    int max_order = 4096;   // ceiling for the series order in s
    long max_terms = 400000;
    int shear = -1000000;   // forced shear; default picks the first transversal one
};

std::vector<Branch> puiseux_branches(const BivPoly& p, const BranchOptions& opt = {});
std::vector<Rat> branch_char_exponents(const Branch& b);
// Series of y to order n in s (extending the stored truncation when needed).
std::vector<Alg> branch_series(const Branch& b, int n);
// Order in s of f(x(s), y(s)) for f in the original coordinates, or -1 if it vanishes below n.
int branch_order_of(const Branch& b, const BivPoly& f, int n);
// alpha of the meet of the two curve valuations; infinite for the same branch.
Value branch_contact(const Branch& a, const Branch& b);
// Contact from the Newton-Puiseux paths of two branches of one decomposition:
// the coincidence exponent kappa averaged over the conjugates of b.
Rat contact_from_paths(const Branch& a, const Branch& b);
// Q-irreducible polynomial through the branch, of total degree at most max_degree.
BivPoly branch_minimal_polynomial(const Branch& b, int max_degree);
std::string branch_json(const Branch& b, int terms = 0);

}  // namespace valmult
