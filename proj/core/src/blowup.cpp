#include "valmult/blowup.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace valmult {

namespace {

KFactor linear_factor(const FieldPtr& K, const Alg& c) {
    KFactor kf;
    Alg one(Rat(1));
    one.F = K;
    kf.factor = KPoly(K, {-c, one});
    kf.factor.trim();
    kf.L = K;
    kf.embed = Embedding::identity(K);
    kf.root = c;
    kf.root.F = K;
    return kf;
}

bool is_w(const KPoly& f) { return f.deg() == 1 && f.coeff(0).is_zero(); }

// Move the residual of one polynomial through a blowup.
LocalState move_state(const LocalState& s, int chart, const Embedding& e, const Alg& w) {
    LocalState t;
    int o = s.res.order();
    if (chart == 1) {
        t.res = s.res.map(e).chart1(w).div_u(o);
        t.eu = s.eu + s.ev + o;
        t.ev = w.is_zero() ? s.ev : 0;
    } else {
        t.res = s.res.chart2().div_v(o);
        t.eu = s.eu;
        t.ev = s.eu + s.ev + o;
    }
    return t;
}

bool principal(const std::vector<LocalState>& st) {
    int a = st[0].eu, b = st[0].ev;
    for (auto& s : st) a = std::min(a, s.eu), b = std::min(b, s.ev);
    for (auto& s : st)
        if (s.eu == a && s.ev == b && !s.res.constant_term().is_zero()) return true;
    return false;
}

}  // namespace

namespace {
std::function<void(const Context&)> g_observer;
}

void set_context_observer(std::function<void(const Context&)> f) { g_observer = std::move(f); }

Context::~Context() {
    if (g_observer && !divs_.empty()) g_observer(*this);
}

long noether_pairing(const Context& c, int f, int g) {
    long s = 0;
    for (auto& p : c.points()) {
        auto a = p.states.find(f), b = p.states.find(g);
        if (a == p.states.end() || b == p.states.end()) continue;
        long ma = std::max(0, a->second[0].res.order()), mb = std::max(0, b->second[0].res.order());
        s += p.degree() * ma * mb;
    }
    return s;
}

Context::Context(long max_blowups) : max_blowups_(max_blowups) {
    InfPoint o;
    o.from_parent = Embedding::identity(nullptr);
    o.X = KPoly2::from_biv(nullptr, BivPoly::x());
    o.Y = KPoly2::from_biv(nullptr, BivPoly::y());
    pts_.push_back(std::move(o));
    blow_up(0);
}

int Context::add_ideal(const std::vector<BivPoly>& gens) {
    TrackedObject ob{ObjectKind::Ideal, {}};
    for (auto& g : gens)
        if (!g.is_zero()) ob.gens.push_back(g);
    if (ob.gens.empty()) throw DomainError("zero ideal");
    int id = static_cast<int>(objs_.size());
    objs_.push_back(ob);
    std::vector<LocalState> st;
    for (auto& g : ob.gens) st.push_back({0, 0, KPoly2::from_biv(nullptr, g)});
    attach(0, id, std::move(st));
    process();
    return id;
}

int Context::add_curve(const BivPoly& f) {
    if (f.is_zero() || f.constant_term() != 0) throw DomainError("curve must pass through the origin");
    int id = static_cast<int>(objs_.size());
    objs_.push_back({ObjectKind::Curve, {f}});
    attach(0, id, {{0, 0, KPoly2::from_biv(nullptr, f)}});
    process();
    return id;
}

void Context::retire(int object) { objs_[object].retired = true; }

void Context::force_blowup(int point) {
    if (pts_[point].divisor >= 0) return;
    blow_up(point);
    process();
}

int Context::new_point(InfPoint p) {
    p.id = static_cast<int>(pts_.size());
    int id = p.id;
    pts_.push_back(std::move(p));
    return id;
}

void Context::attach(int point, int obj, std::vector<LocalState> st) {
    pts_[point].states[obj] = std::move(st);
    if (pts_[point].divisor >= 0)
        transport(point, obj);
    else
        queue_.push_back(point);
}

std::vector<Context::Direction> Context::directions(const InfPoint& p, int obj) const {
    const auto& st = p.states.at(obj);
    std::vector<KPoly2> forms;
    if (objs_[obj].kind == ObjectKind::Ideal) {
        if (principal(st)) return {};
        int a = st[0].eu, b = st[0].ev;
        for (auto& s : st) a = std::min(a, s.eu), b = std::min(b, s.ev);
        int o = -1;
        for (auto& s : st) {
            int t = s.eu - a + s.ev - b + s.res.order();
            if (o < 0 || t < o) o = t;
        }
        for (auto& s : st) {
            if (s.eu - a + s.ev - b + s.res.order() != o) continue;
            KPoly2 m = KPoly2::monomial(p.K, Alg(Rat(1)), s.eu - a, s.ev - b);
            forms.push_back(m * s.res.lowest_form());
        }
    } else {
        if (!st[0].res.constant_term().is_zero()) return {};
        forms.push_back(st[0].res.lowest_form());
    }
    KPoly g;
    bool at_inf = true;
    for (auto& L : forms) {
        int o = L.order();
        if (!L.coeff(0, o).is_zero()) at_inf = false;
        KPoly d = L.dehomogenize();
        d.F = p.K;
        g = g.is_zero() ? d : gcd(g, d);
    }
    std::vector<Direction> out;
    if (g.deg() >= 1)
        for (auto& kf : factor_over(g.monic())) out.push_back({1, kf});
    if (at_inf) out.push_back({2, {}});
    return out;
}

int Context::child(int point, const Direction& d) {
    for (int c : pts_[point].children) {
        const InfPoint& q = pts_[c];
        if (q.chart != d.chart) continue;
        if (d.chart == 2 || q.factor == d.kf.factor) return c;
    }
    const InfPoint& p = pts_[point];
    check(p.divisor >= 0, "child of a point that was not blown up");
    InfPoint q;
    q.parent = point;
    q.chart = d.chart;
    if (d.chart == 1) {
        q.factor = d.kf.factor;
        q.K = d.kf.L;
        q.from_parent = d.kf.embed;
        q.w = d.kf.root;
        q.w.F = q.K;
        q.du = p.divisor;
        q.dv = is_w(q.factor) ? p.dv : -1;
        q.X = p.X.map(q.from_parent).chart1(q.w);
        q.Y = p.Y.map(q.from_parent).chart1(q.w);
    } else {
        q.K = p.K;
        q.from_parent = Embedding::identity(p.K);
        q.du = p.du;
        q.dv = p.divisor;
        q.X = p.X.chart2();
        q.Y = p.Y.chart2();
    }
    int id = new_point(std::move(q));
    pts_[point].children.push_back(id);
    return id;
}

void Context::transport(int point, int obj) {
    auto dirs = directions(pts_[point], obj);
    for (auto& d : dirs) {
        int q = child(point, d);
        const InfPoint& cq = pts_[q];
        std::vector<LocalState> st;
        for (auto& s : pts_[point].states.at(obj)) st.push_back(move_state(s, d.chart, cq.from_parent, cq.w));
        attach(q, obj, std::move(st));
    }
}

bool Context::needs_blowup(const InfPoint& p) const {
    int passing = -1, count = 0;
    for (auto& [obj, st] : p.states) {
        if (objs_[obj].retired) continue;
        if (objs_[obj].kind == ObjectKind::Ideal) {
            if (!principal(st)) return true;
        } else if (st[0].res.constant_term().is_zero()) {
            passing = obj;
            ++count;
        }
    }
    if (count == 0) return false;
    if (count > 1) return true;
    const KPoly2& r = p.states.at(passing)[0].res;
    if (r.order() != 1) return true;
    if ((p.du >= 0) + (p.dv >= 0) != 1) return true;
    // transversal to the single divisor through p
    return p.du >= 0 ? r.coeff(0, 1).is_zero() : r.coeff(1, 0).is_zero();
}

void Context::blow_up(int point) {
    if (static_cast<long>(divs_.size()) >= max_blowups_)
        throw ResourceError("blowup ceiling of " + std::to_string(max_blowups_) + " reached");
    const InfPoint& p = pts_[point];
    DivisorData d;
    d.id = static_cast<int>(divs_.size());
    d.center = point;
    d.degree = p.degree();
    if (point == 0) {
        d.a = 2;
        d.b = 1;
    } else if (p.satellite()) {
        const auto &D1 = divs_[p.du], &D2 = divs_[p.dv];
        d.a = D1.a + D2.a;
        d.b = D1.b + D2.b;
        d.satellite = true;
        d.proximate_to = {p.du, p.dv};
        if (D2.parent == p.du) {
            d.parent = p.du;
            divs_[p.dv].parent = d.id;
        } else {
            check(D1.parent == p.dv, "satellite point between non-adjacent divisors");
            d.parent = p.dv;
            divs_[p.du].parent = d.id;
        }
    } else {
        int D = p.du >= 0 ? p.du : p.dv;
        d.a = divs_[D].a + 1;
        d.b = divs_[D].b;
        d.parent = D;
        d.proximate_to = {D};
    }
    for (int q = point; q >= 0; q = pts_[q].parent) d.cluster.push_back(q);
    std::reverse(d.cluster.begin(), d.cluster.end());
    size_t n = d.cluster.size();
    d.cluster_mults.assign(n, 0);
    d.cluster_mults[n - 1] = 1;
    for (size_t i = n - 1; i-- > 0;) {
        int Ei = pts_[d.cluster[i]].divisor;
        long m = 0;
        for (size_t j = i + 1; j < n; ++j) {
            const InfPoint& pj = pts_[d.cluster[j]];
            if (pj.du == Ei || pj.dv == Ei) m += d.cluster_mults[j];
        }
        d.cluster_mults[i] = m;
    }
    check(d.cluster_mults[0] == d.b, "multiplicity at the origin differs from b");
    Rat s = 0;
    for (long m : d.cluster_mults) s += Rat(m * m);
    d.alpha = s / Rat(d.b * d.b);
    d.A = rat(d.a, d.b);
    if (d.parent >= 0) check(divs_[d.parent].alpha < d.alpha, "skewness must increase away from the root");
    if (d.satellite) {
        int c = d.parent == p.du ? p.dv : p.du;
        check(d.alpha < divs_[c].alpha, "satellite skewness must lie below its child");
    }
    pts_[point].divisor = d.id;
    divs_.push_back(d);

    std::vector<int> objs;
    for (auto& [o, st] : pts_[point].states) objs.push_back(o);
    for (int o : objs) transport(point, o);
    for (auto& e : ends_) {
        if (e.point != point) continue;
        int next = -1;
        for (int c : pts_[point].children)
            if (pts_[c].states.count(e.object)) next = c;
        check(next >= 0, "curve end lost after blowup");
        e.point = next;
    }
}

void Context::process() {
    std::set<int> todo(queue_.begin(), queue_.end());
    queue_.clear();
    while (!todo.empty()) {
        int q = *todo.begin();
        todo.erase(todo.begin());
        if (pts_[q].divisor < 0 && needs_blowup(pts_[q])) blow_up(q);
        todo.insert(queue_.begin(), queue_.end());
        queue_.clear();
    }
    refresh_ends();
}

void Context::refresh_ends() {
    for (auto& p : pts_) {
        if (p.divisor >= 0) continue;
        for (auto& [obj, st] : p.states) {
            if (objs_[obj].kind != ObjectKind::Curve || !st[0].res.constant_term().is_zero()) continue;
            bool known = false;
            for (auto& e : ends_) {
                if (e.point != p.id) continue;
                if (e.object == obj || std::count(e.aliases.begin(), e.aliases.end(), obj)) known = true;
                // a resolved point carries one branch, so an end already here is the same branch
                else if (!known) {
                    e.aliases.push_back(obj);
                    known = true;
                }
            }
            if (!known) ends_.push_back({static_cast<int>(ends_.size()), obj, p.id, p.degree(), {}});
        }
    }
}

std::vector<int> Context::ends_of(int object) {
    std::vector<int> r;
    for (auto& e : ends_)
        if (e.object == object || std::count(e.aliases.begin(), e.aliases.end(), object)) r.push_back(e.id);
    return r;
}

int Context::end_divisor(int end_id) const {
    const InfPoint& q = pts_[ends_[end_id].point];
    return q.du >= 0 ? q.du : q.dv;
}

int Context::parent(int node) const { return is_end_node(node) ? end_divisor(end_of_node(node)) : divs_[node].parent; }

Rat Context::alpha(int node) const {
    if (is_end_node(node)) throw DomainError("curve end has infinite skewness");
    return divs_[node].alpha;
}

Rat Context::thinness(int node) const {
    if (is_end_node(node)) throw DomainError("curve end has infinite thinness");
    return divs_[node].A;
}

int Context::degree(int node) const { return is_end_node(node) ? ends_[end_of_node(node)].degree : divs_[node].degree; }

long Context::edge_mult(int node) const {
    if (is_end_node(node)) return divs_[end_divisor(end_of_node(node))].b;
    if (node == 0) return 1;
    const auto &d = divs_[node], &p = divs_[d.parent];
    Rat m = (d.A - p.A) / (d.alpha - p.alpha);
    check(is_integer(m), "non-integral multiplicity on an edge");
    return to_long(m.get_num());
}

std::vector<int> Context::path_to(int node) const {
    std::vector<int> r;
    for (int n = node;; n = parent(n)) {
        r.push_back(n);
        if (n == 0) break;
    }
    std::reverse(r.begin(), r.end());
    return r;
}

std::vector<int> Context::children(int node) const {
    std::vector<int> r;
    if (is_end_node(node)) return r;
    for (auto& d : divs_)
        if (d.parent == node) r.push_back(d.id);
    for (auto& e : ends_)
        if (end_divisor(e.id) == node) r.push_back(end_node(e.id));
    return r;
}

std::vector<int> Context::all_nodes() const {
    std::vector<int> r;
    for (auto& d : divs_) r.push_back(d.id);
    for (auto& e : ends_) r.push_back(end_node(e.id));
    return r;
}

bool Context::is_ancestor(int a, int b) const {
    for (int n = b;; n = parent(n)) {
        if (n == a) return true;
        if (n == 0) return false;
    }
}

int Context::lca(int a, int b) const {
    auto pa = path_to(a), pb = path_to(b);
    size_t i = 0;
    while (i + 1 < pa.size() && i + 1 < pb.size() && pa[i + 1] == pb[i + 1]) ++i;
    return pa[i];
}

Pos Context::node_pos(int node) const {
    if (is_end_node(node)) return Pos{node, Rat(0), true};
    return Pos{node, divs_[node].alpha, false};
}

Pos Context::locate(int node, const Rat& a) const {
    if (a < 1) throw DomainError("skewness below 1");
    for (int n : path_to(node)) {
        if (is_end_node(n)) return Pos{n, a, false};
        if (a <= divs_[n].alpha) return Pos{n, a, false};
    }
    throw DomainError("skewness beyond the end of the segment");
}

Pos Context::meet(const Pos& a, const Pos& b) const {
    if (a.node == b.node) {
        if (a.inf) return b;
        if (b.inf) return a;
        return a.alpha <= b.alpha ? a : b;
    }
    int l = lca(a.node, b.node);
    if (l == a.node) return a;
    if (l == b.node) return b;
    return node_pos(l);
}

bool Context::same(const Pos& a, const Pos& b) const {
    if (a.node != b.node || a.inf != b.inf) return false;
    return a.inf || a.alpha == b.alpha;
}

bool Context::leq(const Pos& a, const Pos& b) const { return same(meet(a, b), a); }

Rat Context::thinness(const Pos& p) const {
    if (p.inf) throw DomainError("curve valuation has infinite thinness");
    if (p.node == 0) return divs_[0].A;
    int par = parent(p.node);
    return divs_[par].A + Rat(edge_mult(p.node)) * (p.alpha - divs_[par].alpha);
}

Rat Context::phi(const Pos& p) const {
    if (p.inf) throw DomainError("curve valuation has infinite skewness");
    Rat r = 1;
    auto path = path_to(p.node);
    for (size_t i = 1; i < path.size(); ++i) {
        int n = path[i];
        Rat lo = divs_[path[i - 1]].alpha;
        bool last = i + 1 == path.size();
        Rat hi = last ? p.alpha : divs_[n].alpha;
        r += (hi - lo) / Rat(degree(n));
    }
    return r;
}

long Context::multiplicity(const Pos& p) const { return p.node == 0 ? 1 : edge_mult(p.node); }

int Context::pos_degree(const Pos& p) const { return p.node == 0 ? 1 : degree(p.node); }

long Context::divisor_value(int E, const BivPoly& f) {
    if (f.is_zero()) throw DomainError("value of the zero polynomial");
    const InfPoint& p = pts_[divs_[E].center];
    for (int d = std::max(16, 2 * f.total_degree()); d <= (1 << 14); d *= 2) {
        KPoly2 r = substitute_trunc(f, p.X, p.Y, d);
        if (!r.is_zero()) return r.order();
    }
    throw ResourceError("divisor value exceeds truncation ceiling");
}

const KPoly2& Context::pulled_monomial(int E, int i, int j, int k) {
    JetCache& c = jets_[E];
    if (c.k != k) {
        c = JetCache{};
        c.k = k;
    }
    auto it = c.mono.find({i, j});
    if (it != c.mono.end()) return it->second;
    const InfPoint& p = pts_[divs_[E].center];
    if (c.xp.empty()) {
        c.xp.push_back(KPoly2::monomial(p.K, Alg(Rat(1)), 0, 0));
        c.yp.push_back(c.xp[0]);
    }
    while ((int)c.xp.size() <= i) c.xp.push_back(mul_trunc(c.xp.back(), p.X, k - 1));
    while ((int)c.yp.size() <= j) c.yp.push_back(mul_trunc(c.yp.back(), p.Y, k - 1));
    return c.mono.emplace(Mono{i, j}, mul_trunc(c.xp[i], c.yp[j], k - 1)).first->second;
}

int Context::extend_with_free_points(int E, int n) {
    if (n < 0) throw DomainError("negative extension depth");
    int cur = E;
    for (int step = 0; step < n; ++step) {
        int p = divs_[cur].center;
        FieldPtr K = pts_[p].K;
        for (long c = pts_[p].dv >= 0 ? 1 : 0;; ++c) {
            KFactor kf = linear_factor(K, Alg(Rat(c)));
            bool used = false;
            for (int ch : pts_[p].children) used = used || (pts_[ch].chart == 1 && pts_[ch].factor == kf.factor);
            if (used) continue;
            int q = child(p, {1, kf});
            force_blowup(q);
            cur = pts_[q].divisor;
            break;
        }
    }
    return cur;
}

int Context::satellite_child(int later, int other) {
    int c = divs_[later].center;
    const InfPoint& p = pts_[c];
    if (p.dv == other) return child(c, {1, linear_factor(p.K, Alg(Rat(0)))});
    check(p.du == other, "divisors do not meet");
    return child(c, {2, {}});
}

int Context::realize(const Pos& target) {
    if (target.inf) throw DomainError("curve valuations are not divisorial");
    for (;;) {
        Pos p = locate(target.node, target.alpha);
        if (!is_end_node(p.node) && p.alpha == divs_[p.node].alpha) return p.node;
        if (is_end_node(p.node)) {
            force_blowup(ends_[end_of_node(p.node)].point);
            continue;
        }
        int par = divs_[p.node].parent;
        int later = std::max(par, p.node), other = std::min(par, p.node);
        force_blowup(satellite_child(later, other));
    }
}

ResolutionTree log_resolution(const std::vector<BivPoly>& gens, long max_blowups) {
    ResolutionTree t;
    for (auto& g : gens)
        if (!g.is_zero()) t.generators.push_back(g);
    if (t.generators.empty()) throw DomainError("zero ideal");
    BivPoly phi;
    for (auto& g : t.generators) phi = phi.is_zero() ? normalize(g) : gcd(phi, g);
    t.principal = phi;
    t.ctx = std::make_shared<Context>(max_blowups);
    std::vector<BivPoly> rest;
    for (auto& g : t.generators) rest.push_back(exact_div(g, phi));
    t.ideal_object = t.ctx->add_ideal(rest);
    if (!phi.is_constant()) {
        FactorBase fb = coprime_base({phi});
        for (size_t i = 0; i < fb.base.size(); ++i) {
            if (fb.base[i].constant_term() != 0) continue;
            t.curve_base.push_back(fb.base[i]);
            t.curve_exponents.push_back(fb.exponents[0][i]);
            t.curve_objects.push_back(t.ctx->add_curve(fb.base[i]));
        }
    }
    for (auto& d : t.ctx->divisors()) {
        std::vector<long> o;
        for (auto& g : t.generators) o.push_back(t.ctx->divisor_value(d.id, g));
        t.r.push_back(*std::min_element(o.begin(), o.end()));
        t.orders.push_back(std::move(o));
    }
    return t;
}

long divisor_value(ResolutionTree& t, int E, const BivPoly& p) {
    if (E < 0 || E >= (int)t.ctx->divisors().size()) throw DomainError("unknown divisor " + std::to_string(E));
    return t.ctx->divisor_value(E, p);
}

int extend_with_free_points(ResolutionTree& t, int E, int n) {
    if (E < 0 || E >= (int)t.ctx->divisors().size()) throw DomainError("unknown divisor " + std::to_string(E));
    int r = t.ctx->extend_with_free_points(E, n);
    // keep per-divisor orders in sync with the grown tree
    for (size_t d = t.orders.size(); d < t.ctx->divisors().size(); ++d) {
        std::vector<long> o;
        for (auto& g : t.generators) o.push_back(t.ctx->divisor_value(static_cast<int>(d), g));
        t.r.push_back(*std::min_element(o.begin(), o.end()));
        t.orders.push_back(std::move(o));
    }
    return r;
}

std::string resolution_json(const ResolutionTree& t) {
    using nlohmann::json;
    const Context& c = *t.ctx;
    json j;
    json gens = json::array();
    for (auto& g : t.generators) gens.push_back(to_string(g));
    j["generators"] = gens;
    json divs = json::array(), edges = json::array(), strict = json::array();
    for (auto& d : c.divisors()) {
        json e;
        e["id"] = d.id;
        e["a"] = d.a;
        e["b"] = d.b;
        e["alpha"] = to_string(d.alpha);
        e["A"] = to_string(d.A);
        e["r"] = d.id < (int)t.r.size() ? t.r[d.id] : -1;
        e["degree"] = d.degree;
        e["kind"] = d.id == 0 ? "root" : d.satellite ? "satellite" : "free";
        e["proximate_to"] = d.proximate_to;
        e["cluster_multiplicities"] = d.cluster_mults;
        e["parent"] = d.parent;
        divs.push_back(e);
        if (d.parent >= 0) edges.push_back({d.parent, d.id});
    }
    for (auto& e : c.ends()) {
        json s;
        s["id"] = e.id;
        int k = static_cast<int>(std::find(t.curve_objects.begin(), t.curve_objects.end(), e.object) - t.curve_objects.begin());
        s["curve"] = k < (int)t.curve_base.size() ? to_string(t.curve_base[k]) : "";
        s["exponent"] = k < (int)t.curve_exponents.size() ? t.curve_exponents[k] : 0;
        s["divisor"] = c.end_divisor(e.id);
        s["degree"] = e.degree;
        strict.push_back(s);
        edges.push_back({c.end_divisor(e.id), "strict:" + std::to_string(e.id)});
    }
    j["divisors"] = divs;
    j["strict_transforms"] = strict;
    j["edges"] = edges;
    return j.dump(2);
}

}  // namespace valmult
