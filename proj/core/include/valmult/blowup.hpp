#pragma once

#include "valmult/kpoly2.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valmult {

// Residual data of one polynomial at an infinitely near point: the total
// transform equals u^eu * v^ev * res up to a local unit.
struct LocalState {
    int eu = 0, ev = 0;
    KPoly2 res;
};

// A closed infinitely near point. Its residue field K may be a proper
// extension of Q; the point then stands for deg(K) conjugate geometric points.
struct InfPoint {
    int id = 0;
    int parent = -1;  // point it lies above (on the parent's exceptional divisor)
    int chart = 0;    // 0 root, 1 affine chart at w = root, 2 origin of the second chart
    KPoly factor;     // chart 1: monic irreducible polynomial in w over the parent's field
    FieldPtr K;
    Embedding from_parent;
    Alg w;            // chart 1: coordinate value on the parent's divisor
    int du = -1, dv = -1;  // exceptional divisors {u = 0}, {v = 0} through the point
    KPoly2 X, Y;      // pullbacks of x and y in local coordinates (u, v)
    int divisor = -1; // divisor created by blowing this point up
    std::vector<int> children;
    std::map<int, std::vector<LocalState>> states;  // tracked object -> per generator
    int degree() const { return field_degree(K); }
    bool satellite() const { return du >= 0 && dv >= 0; }
};

struct DivisorData {
    int id = 0;
    int center = 0;  // point blown up
    long a = 0, b = 0;
    Rat alpha, A;
    int degree = 1;
    int parent = -1;  // dual tree parent; -1 for the first divisor
    bool satellite = false;
    std::vector<int> proximate_to;   // divisors through the center
    std::vector<int> cluster;        // points from the origin to the center
    std::vector<long> cluster_mults; // generic curvette multiplicities along the cluster
};

// An end of the closed dual tree: a closed branch of a tracked curve.
struct CurveEnd {
    int id = 0;
    int object = 0;
    int point = 0;  // current terminal point (moves when that point is blown up)
    int degree = 1;
    std::vector<int> aliases;  // later curve objects sharing this branch
};

enum class ObjectKind { Ideal, Curve };

struct TrackedObject {
    ObjectKind kind;
    std::vector<BivPoly> gens;  // Curve: exactly one squarefree polynomial through the origin
    bool retired = false;       // still transported, but no longer drives blowups
};

// Node of the closed dual tree: divisors are >= 0, curve ends are encoded as -1 - end id.
inline bool is_end_node(int node) { return node < 0; }
inline int end_node(int end_id) { return -1 - end_id; }
inline int end_of_node(int node) { return -1 - node; }

// Position on the closed valuative tree: the point of skewness `alpha` on the
// edge from parent(node) to node. Curve ends allow alpha = infinity.
struct Pos {
    int node = 0;
    Rat alpha = 1;
    bool inf = false;
};

// Incrementally built embedded resolution shared by every computation that
// needs tree combinatorics.
class Context {
public:
    explicit Context(long max_blowups = 4000);
    Context(const Context&) = default;
    Context(Context&&) = default;
    Context& operator=(const Context&) = default;
    Context& operator=(Context&&) = default;
    ~Context();

    int add_ideal(const std::vector<BivPoly>& gens);
    int add_curve(const BivPoly& f);  // f squarefree, through the origin
    void force_blowup(int point);
    // Stop an object from driving blowups, e.g. once it has been split into coprime pieces.
    void retire(int object);

    // Curve ends currently attached for a curve object.
    std::vector<int> ends_of(int object);

    // Free-point extension on divisor E, n blowups deep. Returns the new divisor.
    int extend_with_free_points(int E, int n);
    // Divisor realizing a quasimonomial position (refining the tree as needed).
    int realize(const Pos& p);

    // Tree queries.
    const std::vector<InfPoint>& points() const { return pts_; }
    const std::vector<DivisorData>& divisors() const { return divs_; }
    const std::vector<CurveEnd>& ends() const { return ends_; }
    const TrackedObject& object(int id) const { return objs_[id]; }
    int object_count() const { return static_cast<int>(objs_.size()); }
    int parent(int node) const;
    Rat alpha(int node) const;  // ends: throws
    Rat thinness(int node) const;
    int degree(int node) const;
    long edge_mult(int node) const;  // multiplicity on the edge into node
    int end_divisor(int end_id) const;
    std::vector<int> path_to(int node) const;  // root first
    std::vector<int> children(int node) const;
    std::vector<int> all_nodes() const;
    bool is_ancestor(int a, int b) const;  // a <= b in tree order (nodes)
    int lca(int a, int b) const;

    // Positions.
    Pos root_pos() const { return Pos{0, Rat(1), false}; }
    Pos node_pos(int node) const;
    Pos locate(int node, const Rat& alpha) const;  // position on the path to node at skewness alpha
    Pos meet(const Pos& a, const Pos& b) const;
    bool leq(const Pos& a, const Pos& b) const;
    bool same(const Pos& a, const Pos& b) const;
    Rat thinness(const Pos& p) const;
    Rat phi(const Pos& p) const;  // Galois-normalized skewness
    long multiplicity(const Pos& p) const;
    int pos_degree(const Pos& p) const;

    // div_E(pi^* f) by pullback through the chart chain of E.
    long divisor_value(int E, const BivPoly& f);
    // Taylor jets: coefficient matrix of x^i y^j pulled back, truncated below total degree k.
    const KPoly2& pulled_monomial(int E, int i, int j, int k);

    long blowups() const { return static_cast<long>(divs_.size()); }
    long max_blowups() const { return max_blowups_; }
    void set_max_blowups(long m) { max_blowups_ = m; }

private:
    struct Direction {
        int chart;
        KFactor kf;
    };

    std::vector<InfPoint> pts_;
    std::vector<DivisorData> divs_;
    std::vector<CurveEnd> ends_;
    std::vector<TrackedObject> objs_;
    std::vector<int> queue_;
    long max_blowups_;
    struct JetCache {
        int k = -1;
        std::map<Mono, KPoly2> mono;
        std::vector<KPoly2> xp, yp;
    };
    std::map<int, JetCache> jets_;

    int new_point(InfPoint p);
    void attach(int point, int obj, std::vector<LocalState> st);
    void transport(int point, int obj);
    void blow_up(int point);
    bool needs_blowup(const InfPoint& p) const;
    void process();
    void refresh_ends();
    std::vector<Direction> directions(const InfPoint& p, int obj) const;
    int child(int point, const Direction& d);
    int satellite_child(int later_divisor, int other_divisor);
    int refine_edge(int node, const Rat& alpha);
};

// Log resolution of an ideal together with invariants of each divisor.
struct ResolutionTree {
    std::shared_ptr<Context> ctx;
    std::vector<BivPoly> generators;
    BivPoly principal;                  // gcd of the generators
    std::vector<BivPoly> curve_base;    // coprime squarefree factors of the principal part through the origin
    std::vector<int> curve_exponents;
    std::vector<int> curve_objects;
    int ideal_object = -1;
    std::vector<std::vector<long>> orders;  // orders[E][k] = div_E(generator k)
    std::vector<long> r;                    // r_E = min_k orders[E][k]
};

// Sum over shared points of products of strict transform multiplicities of
// two tracked curve objects (weighted by the degree of each closed point).
long noether_pairing(const Context& c, int f, int g);

// Instrumentation: called with every nonempty context as it is destroyed.
// Install before any context exists; pass nullptr to remove.
void set_context_observer(std::function<void(const Context&)> f);

ResolutionTree log_resolution(const std::vector<BivPoly>& gens, long max_blowups = 4000);
long divisor_value(ResolutionTree& t, int E, const BivPoly& p);
int extend_with_free_points(ResolutionTree& t, int E, int n);
std::string resolution_json(const ResolutionTree& t);

}  // namespace valmult
