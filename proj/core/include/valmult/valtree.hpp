#pragma once

#include "valmult/blowup.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace valmult {

enum class ValKind { Multiplicity, Divisorial, Quasimonomial, Curve };

// A valuation living in a World. Its position is the point of skewness t on
// the segment from the root to `node` (or the end itself for curves).
struct Valuation {
    ValKind kind = ValKind::Multiplicity;
    BivPoly carrier;  // quasimonomial and curve: polynomial with one closed branch (may be empty for derived points)
    Rat t = 1;
    int divisor = -1;
    int node = 0;
};

enum class Order { Less, Greater, Equal, Incomparable };
const char* to_string(Order o);

struct SegmentProfile {
    std::vector<std::pair<Rat, long>> breakpoints;  // (alpha_i, m_i), starting at (1, 1)
};

// Working context shared by every valuation that is compared or evaluated
// together. Adding curves or refining only ever grows the underlying tree.
class World {
public:
    explicit World(long max_blowups = 4000);
    explicit World(std::shared_ptr<Context> ctx);

    Context& ctx() { return *ctx_; }
    const Context& ctx() const { return *ctx_; }
    std::shared_ptr<Context> shared() const { return ctx_; }

    Valuation root() const;
    Valuation curve(const BivPoly& f);
    Valuation quasimonomial(const BivPoly& f, const Rat& t);
    Valuation divisorial(int E) const;
    // Divisor E of a resolution built elsewhere, matched along its cluster chain.
    Valuation divisorial(const ResolutionTree& t, int E);
    Valuation at(const Pos& p) const;
    Valuation parse(const std::string& literal);

    Pos pos(const Valuation& v) const;
    bool same(const Valuation& a, const Valuation& b) const;
    bool leq(const Valuation& a, const Valuation& b) const;
    Order compare(const Valuation& a, const Valuation& b) const;
    Valuation meet(const Valuation& a, const Valuation& b) const;

    Value eval(const Valuation& v, const BivPoly& p);
    Value eval_ideal(const Valuation& v, const std::vector<BivPoly>& gens);
    Value alpha(const Valuation& v) const;
    Value thinness(const Valuation& v) const;
    long multiplicity_of(const Valuation& v) const;
    int degree(const Valuation& v) const;
    SegmentProfile segment_profile(const BivPoly& branch);
    SegmentProfile segment_profile(const Valuation& v) const;

    // Closed ends of the branches of p through the origin, with their exponents in p.
    std::vector<std::pair<int, int>> ends_of(const BivPoly& p);
    int end_of(const BivPoly& branch);  // throws unless there is exactly one closed branch
    // Register a curve, keeping the tracked curves pairwise coprime; returns the objects covering it.
    std::vector<int> curve_objects(const BivPoly& f);
    // Tracked polynomial whose only closed branch at the origin is this end (empty if none).
    BivPoly branch_polynomial(int end_id);
    // Track an ideal through the origin so that it gets principalized (cached).
    int add_ideal(const std::vector<BivPoly>& gens);

    // Galois-normalized value of the end through the pairing m * d * phi(meet).
    Value pair_with_end(const Pos& p, int end_id) const;

    std::string json(const Valuation& v) const;

private:
    std::shared_ptr<Context> ctx_;
    std::vector<std::pair<BivPoly, int>> atoms_;  // active coprime curves through the origin
    std::map<std::string, int> ideals_;
    std::map<std::string, std::vector<std::pair<int, int>>> ends_cache_;
};

std::string to_string(const SegmentProfile& s);
const char* valuation_grammar();

}  // namespace valmult
