#pragma once

#include "valmult/valtree.hpp"

#include <functional>
#include <string>
#include <vector>

namespace valmult {

// Atom of a measure. For a closed point of degree d the mass is the total over
// its d conjugates, so g(v) = sum mass * phi(v ^ atom).
struct Atom {
    Valuation v;
    Rat mass;
};

struct TreePotential {
    std::vector<Atom> atoms;
    // Independent definition of g when one is known (nu -> nu(I) for ideals);
    // used by the Laplacian round trip.
    std::function<Value(World&, const Valuation&)> source;
};

TreePotential make_potential(World& w, std::vector<Atom> atoms);
Rat total_mass(const TreePotential& g);
TreePotential scale(World& w, const TreePotential& g, const Rat& c);
TreePotential add(World& w, const TreePotential& a, const TreePotential& b);

Value eval_potential(World& w, const TreePotential& g, const Valuation& v);
Value eval_potential(World& w, const TreePotential& g, const Pos& p);

TreePotential tree_transform_poly(World& w, const BivPoly& p);
TreePotential tree_transform_ideal(World& w, const std::vector<BivPoly>& gens);

TreePotential restrict_to_tree(World& w, const TreePotential& g, const std::vector<Valuation>& ends);

struct ReductionTree {
    bool empty = false;
    std::vector<Valuation> ends;
};
ReductionTree finite_reduction_tree(World& w, const TreePotential& g, const Rat& eps);
// Potential of the restriction to a reduction tree (zero for the empty tree).
TreePotential reduce(World& w, const TreePotential& g, const ReductionTree& t);

// Finite tree spanned by the root and a set of tips, closed under meets and
// containing every dual graph node below a tip.
struct SupportTree {
    std::vector<Pos> vertices;  // sorted root first
    std::vector<int> parent;    // -1 for the root
};
SupportTree support_tree(World& w, const std::vector<Pos>& tips);

struct EdgeCertificate {
    int from = 0, to = 0;
    int sign = 0;  // sign of d chi / d alpha on the open edge
};

struct ChiReport {
    Rat sup;
    std::vector<Valuation> argmax;
    std::vector<Valuation> vertices;
    std::vector<Value> values;  // chi at each vertex (limit at curve ends)
    std::vector<EdgeCertificate> certificates;
};

// sup of h(v) / (v(psi) + A(v)); psi = 1 gives the Arnold multiplicity.
ChiReport chi_max(World& w, const TreePotential& h, const BivPoly& psi);

bool laplacian_roundtrip_check(World& w, const TreePotential& g);

std::string measure_json(World& w, const TreePotential& g);
std::string chi_json(World& w, const ChiReport& r);

}  // namespace valmult
