#include "valmult/valtree.hpp"
#include "valmult/branch.hpp"

#include <json.hpp>

namespace valmult {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        size_t k = s.find(sep, start);
        out.push_back(trim(s.substr(start, k == std::string::npos ? std::string::npos : k - start)));
        if (k == std::string::npos) break;
        start = k + 1;
    }
    return out;
}

std::string ideal_key(const std::vector<BivPoly>& gens) {
    std::string k;
    for (auto& g : gens) k += to_string(g) + ";";
    return k;
}

// p(x0, y) as a polynomial in y
UPoly at_x(const BivPoly& p, const Rat& x0) {
    std::vector<Rat> c;
    for (auto& u : p.y_coeffs()) c.push_back(u.eval(x0));
    UPoly r(c);
    r.trim();
    return r;
}

// Cheap certificate that a and b share no factor: a specialization that keeps
// the leading coefficient of a alive in each variable and has a unit gcd.
bool surely_coprime(const BivPoly& a, const BivPoly& b) {
    for (int pass = 0; pass < 2; ++pass) {
        BivPoly A = pass ? a.swap_xy() : a, B = pass ? b.swap_xy() : b;
        if (A.deg_y() == 0) continue;
        UPoly lc = A.y_coeffs().back();
        Rat x0 = 7;
        while (lc.eval(x0) == 0) x0 += 1;
        if (gcd(at_x(A, x0), at_x(B, x0)).deg() > 0) return false;
    }
    return true;
}

}  // namespace

const char* to_string(Order o) {
    switch (o) {
        case Order::Less: return "less";
        case Order::Greater: return "greater";
        case Order::Equal: return "equal";
        default: return "incomparable";
    }
}

const char* valuation_grammar() {
    return "valuation := 'm' | 'curve:' POLY | 'quasimonomial:' POLY ':' RAT | 'divisorial:' POLY (';' POLY)* ':' INT";
}

World::World(long max_blowups) : ctx_(std::make_shared<Context>(max_blowups)) {}
World::World(std::shared_ptr<Context> ctx) : ctx_(std::move(ctx)) {
    for (int o = 0; o < ctx_->object_count(); ++o) {
        const auto& ob = ctx_->object(o);
        if (ob.kind == ObjectKind::Curve && !ob.retired) atoms_.push_back({normalize(ob.gens[0]), o});
    }
}

Valuation World::root() const {
    Valuation v;
    v.kind = ValKind::Multiplicity;
    v.divisor = 0;
    return v;
}

std::vector<int> World::curve_objects(const BivPoly& f) {
    BivPoly rem = normalize(squarefree_part(f));
    std::vector<int> out;
    std::vector<std::pair<BivPoly, int>> next;
    std::vector<BivPoly> fresh;
    for (auto& [a, o] : atoms_) {
        if (rem.is_constant() || surely_coprime(a, rem)) {
            next.push_back({a, o});
            continue;
        }
        BivPoly d = gcd(rem, a);
        if (d.is_constant()) {
            next.push_back({a, o});
            continue;
        }
        rem = exact_div(rem, d);
        BivPoly rest = exact_div(a, d);
        if (d.constant_term() != 0) {
            next.push_back({a, o});  // shared factor misses the origin
            continue;
        }
        if (rest.is_constant() || rest.constant_term() != 0) {
            next.push_back({a, o});
            out.push_back(o);
            continue;
        }
        // the atom splits: retire it and track both pieces
        ctx_->retire(o);
        fresh.push_back(normalize(d));
        next.push_back({normalize(rest), -1});
    }
    if (!rem.is_constant() && rem.constant_term() == 0) fresh.push_back(normalize(rem));
    for (auto& [a, o] : next)
        if (o < 0) o = ctx_->add_curve(a);
    for (auto& g : fresh) {
        int o = ctx_->add_curve(g);
        next.push_back({g, o});
        out.push_back(o);
    }
    atoms_ = std::move(next);
    return out;
}

std::vector<std::pair<int, int>> World::ends_of(const BivPoly& p) {
    if (p.is_zero()) throw DomainError("zero polynomial");
    std::vector<std::pair<int, int>> out;
    if (p.constant_term() != 0) return out;
    // ends stay valid when their object is later split, so the cache never goes stale
    std::string key = to_string(p);
    auto it = ends_cache_.find(key);
    if (it != ends_cache_.end()) return it->second;
    FactorBase fb = coprime_base({p});
    for (size_t i = 0; i < fb.base.size(); ++i) {
        if (fb.base[i].constant_term() != 0) continue;
        for (int obj : curve_objects(fb.base[i]))
            for (int e : ctx_->ends_of(obj)) out.push_back({e, fb.exponents[0][i]});
    }
    ends_cache_[key] = out;
    return out;
}

int World::end_of(const BivPoly& branch) {
    auto es = ends_of(branch);
    if (es.size() != 1)
        throw DomainError(to_string(branch) + " has " + std::to_string(es.size()) + " closed branches at the origin, expected one");
    return es[0].first;
}

Valuation World::curve(const BivPoly& f) {
    Valuation v;
    v.kind = ValKind::Curve;
    v.carrier = f;
    v.node = end_node(end_of(f));
    return v;
}

Valuation World::quasimonomial(const BivPoly& f, const Rat& t) {
    if (t < 1) throw DomainError("quasimonomial parameter must be at least 1");
    int e = end_of(f);
    if (t == 1) return root();
    Valuation v;
    v.kind = ValKind::Quasimonomial;
    v.carrier = f;
    v.t = t;
    v.node = end_node(e);
    return v;
}

Valuation World::divisorial(int E) const {
    if (E < 0 || E >= (int)ctx_->divisors().size()) throw DomainError("unknown divisor " + std::to_string(E));
    if (E == 0) return root();
    Valuation v;
    v.kind = ValKind::Divisorial;
    v.divisor = E;
    v.node = E;
    v.t = ctx_->divisors()[E].alpha;
    return v;
}

BivPoly World::branch_polynomial(int end_id) {
    const CurveEnd& e = ctx_->ends()[end_id];
    std::vector<int> objs{e.object};
    objs.insert(objs.end(), e.aliases.begin(), e.aliases.end());
    for (int o : objs) {
        BivPoly f = ctx_->object(o).gens[0];
        auto es = ends_of(f);
        if (es.size() == 1 && es[0].first == end_id) return f;
        if (es.size() == 1) continue;
        // split off the irreducible factor through each branch
        for (auto& br : puiseux_branches(f)) {
            BivPoly F = branch_minimal_polynomial(br, f.total_degree());
            check(divides(F, f), "branch polynomial does not divide its curve");
            auto fs = ends_of(F);
            if (fs.size() == 1 && fs[0].first == end_id) return F;
        }
    }
    return BivPoly();
}

int World::add_ideal(const std::vector<BivPoly>& gens) {
    std::string key = ideal_key(gens);
    auto it = ideals_.find(key);
    if (it != ideals_.end()) return it->second;
    return ideals_[key] = ctx_->add_ideal(gens);
}

Valuation World::divisorial(const ResolutionTree& t, int E) {
    if (t.ctx == ctx_) return divisorial(E);
    const Context& src = *t.ctx;
    if (E < 0 || E >= (int)src.divisors().size()) throw DomainError("unknown divisor " + std::to_string(E));
    // make every base point of that resolution exist here first
    std::string key = ideal_key(t.generators);
    if (!ideals_.count(key)) {
        std::vector<BivPoly> rest;
        for (auto& g : t.generators) rest.push_back(exact_div(g, t.principal));
        ideals_[key] = ctx_->add_ideal(rest);
        for (auto& c : t.curve_base) curve_objects(c);
    }
    const auto& chain = src.divisors()[E].cluster;
    int q = 0;
    for (size_t k = 1; k < chain.size(); ++k) {
        const InfPoint& sp = src.points()[chain[k]];
        ctx_->force_blowup(q);
        int hit = -1;
        for (int c : ctx_->points()[q].children) {
            const InfPoint& cp = ctx_->points()[c];
            if (cp.chart == sp.chart && (sp.chart == 2 || cp.factor == sp.factor)) hit = c;
        }
        if (hit < 0) throw DomainError("divisor " + std::to_string(E) + " could not be matched in the shared tree");
        q = hit;
    }
    ctx_->force_blowup(q);
    return divisorial(ctx_->points()[q].divisor);
}

Valuation World::at(const Pos& p) const {
    Valuation v;
    if (p.inf) {
        v.kind = ValKind::Curve;
        v.node = p.node;
        v.carrier = ctx_->object(ctx_->ends()[end_of_node(p.node)].object).gens[0];
        return v;
    }
    if (p.alpha == 1) return root();
    if (!is_end_node(p.node) && p.alpha == ctx_->divisors()[p.node].alpha) return divisorial(p.node);
    v.kind = ValKind::Quasimonomial;
    v.node = p.node;
    v.t = p.alpha;
    if (is_end_node(p.node)) v.carrier = ctx_->object(ctx_->ends()[end_of_node(p.node)].object).gens[0];
    return v;
}

Valuation World::parse(const std::string& literal) {
    std::string s = trim(literal);
    if (s == "m") return root();
    size_t c = s.find(':');
    if (c == std::string::npos) throw DomainError(std::string("bad valuation literal; ") + valuation_grammar());
    std::string kind = s.substr(0, c), rest = s.substr(c + 1);
    if (kind == "curve") return curve(parse_poly(rest));
    size_t d = rest.rfind(':');
    if (d == std::string::npos) throw DomainError(std::string("bad valuation literal; ") + valuation_grammar());
    std::string head = rest.substr(0, d), tail = trim(rest.substr(d + 1));
    if (kind == "quasimonomial") return quasimonomial(parse_poly(head), parse_rat(tail));
    if (kind == "divisorial") {
        std::vector<BivPoly> gens;
        for (auto& g : split(head, ';')) gens.push_back(parse_poly(g));
        long id = 0;
        try {
            id = std::stol(tail);
        } catch (const std::exception&) {
            throw DomainError("bad divisor id '" + tail + "'");
        }
        auto t = log_resolution(gens, ctx_->max_blowups());
        return divisorial(t, static_cast<int>(id));
    }
    throw DomainError("unknown valuation kind '" + kind + "'; " + valuation_grammar());
}

Pos World::pos(const Valuation& v) const {
    if (v.kind == ValKind::Curve) return Pos{v.node, Rat(0), true};
    if (v.kind == ValKind::Multiplicity) return ctx_->root_pos();
    return ctx_->locate(v.node, v.t);
}

bool World::same(const Valuation& a, const Valuation& b) const { return ctx_->same(pos(a), pos(b)); }
bool World::leq(const Valuation& a, const Valuation& b) const { return ctx_->leq(pos(a), pos(b)); }

Order World::compare(const Valuation& a, const Valuation& b) const {
    bool ab = leq(a, b), ba = leq(b, a);
    if (ab && ba) return Order::Equal;
    if (ab) return Order::Less;
    if (ba) return Order::Greater;
    return Order::Incomparable;
}

Valuation World::meet(const Valuation& a, const Valuation& b) const {
    Pos pa = pos(a), pb = pos(b), m = ctx_->meet(pa, pb);
    if (ctx_->same(m, pa)) return a;
    if (ctx_->same(m, pb)) return b;
    if (m.alpha == 1) return root();
    for (const Valuation* v : {&a, &b}) {
        if (v->carrier.is_zero() || v->kind == ValKind::Divisorial) continue;
        Valuation r;
        r.kind = ValKind::Quasimonomial;
        r.carrier = v->carrier;
        r.node = v->node;
        r.t = m.alpha;
        return r;
    }
    return at(m);
}

Value World::pair_with_end(const Pos& p, int end_id) const {
    int n = end_node(end_id);
    Pos m = ctx_->meet(p, ctx_->node_pos(n));
    if (m.inf) return Value::infinity();
    return Value(Rat(ctx_->edge_mult(n) * ctx_->degree(n)) * ctx_->phi(m));
}

Value World::eval(const Valuation& v, const BivPoly& p) {
    auto es = ends_of(p);
    Pos pv = pos(v);
    Rat s = 0;
    for (auto [e, n] : es) {
        Value c = pair_with_end(pv, e);
        if (c.inf) return c;
        s += Rat(n) * c.v;
    }
    return Value(s);
}

Value World::eval_ideal(const Valuation& v, const std::vector<BivPoly>& gens) {
    Value best = Value::infinity();
    bool any = false;
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        any = true;
        Value x = eval(v, g);
        if (x < best) best = x;
    }
    if (!any) throw DomainError("zero ideal");
    return best;
}

Value World::alpha(const Valuation& v) const {
    if (v.kind == ValKind::Curve) return Value::infinity();
    return Value(pos(v).alpha);
}

Value World::thinness(const Valuation& v) const {
    if (v.kind == ValKind::Curve) return Value::infinity();
    return Value(ctx_->thinness(pos(v)));
}

long World::multiplicity_of(const Valuation& v) const { return ctx_->multiplicity(pos(v)); }

int World::degree(const Valuation& v) const { return ctx_->pos_degree(pos(v)); }

SegmentProfile World::segment_profile(const BivPoly& branch) { return segment_profile(curve(branch)); }

SegmentProfile World::segment_profile(const Valuation& v) const {
    SegmentProfile s;
    s.breakpoints.push_back({Rat(1), 1});
    auto path = ctx_->path_to(pos(v).node);
    for (size_t i = 1; i < path.size(); ++i) {
        long m = ctx_->edge_mult(path[i]);
        long last = s.breakpoints.back().second;
        if (m == last) continue;
        check(m > last && m % last == 0, "multiplicity must grow by divisibility along a segment");
        s.breakpoints.push_back({ctx_->alpha(path[i - 1]), m});
    }
    return s;
}

std::string World::json(const Valuation& v) const {
    nlohmann::json j;
    switch (v.kind) {
        case ValKind::Multiplicity: j["kind"] = "multiplicity"; break;
        case ValKind::Divisorial:
            j["kind"] = "divisorial";
            j["divisor"] = v.divisor;
            break;
        case ValKind::Quasimonomial: j["kind"] = "quasimonomial"; break;
        case ValKind::Curve: j["kind"] = "curve"; break;
    }
    if (!v.carrier.is_zero()) j["branch"] = to_string(v.carrier);
    if (v.kind == ValKind::Quasimonomial && v.carrier.is_zero()) j["node"] = v.node;
    if (v.kind != ValKind::Curve) j["t"] = to_string(v.t);
    return j.dump();
}

std::string to_string(const SegmentProfile& s) {
    nlohmann::json j = nlohmann::json::array();
    for (auto& [a, m] : s.breakpoints) j.push_back({to_string(a), m});
    return j.dump();
}

}  // namespace valmult
