#include "valmult/potential.hpp"

#include <json.hpp>

#include <algorithm>

namespace valmult {

namespace {

Value times(const Value& v, const Rat& c) {
    if (v.inf) return c == 0 ? Value(0) : v;
    return Value(v.v * c);
}

std::vector<Pos> atom_positions(World& w, const TreePotential& g) {
    std::vector<Pos> out;
    for (auto& a : g.atoms) out.push_back(w.pos(a.v));
    return out;
}

// closed mass of the atoms at or above p
Rat mass_above(World& w, const TreePotential& g, const Pos& p) {
    Rat s = 0;
    for (auto& a : g.atoms)
        if (w.ctx().leq(p, w.pos(a.v))) s += a.mass;
    return s;
}

int sign(const Rat& r) { return r > 0 ? 1 : r < 0 ? -1 : 0; }

// path of vertex k from the root, root first
std::vector<int> vertex_path(const SupportTree& s, int k) {
    std::vector<int> r;
    for (int v = k; v >= 0; v = s.parent[v]) r.push_back(v);
    std::reverse(r.begin(), r.end());
    return r;
}

}  // namespace

TreePotential make_potential(World& w, std::vector<Atom> atoms) {
    TreePotential g;
    std::vector<Pos> ps;
    for (auto& a : atoms) {
        if (a.mass < 0) throw DomainError("negative mass in a tree potential");
        if (a.mass == 0) continue;
        Pos p = w.pos(a.v);
        bool merged = false;
        for (size_t i = 0; i < ps.size() && !merged; ++i)
            if (w.ctx().same(ps[i], p)) {
                g.atoms[i].mass += a.mass;
                merged = true;
            }
        if (!merged) {
            ps.push_back(p);
            g.atoms.push_back(std::move(a));
        }
    }
    return g;
}

Rat total_mass(const TreePotential& g) {
    Rat s = 0;
    for (auto& a : g.atoms) s += a.mass;
    return s;
}

TreePotential scale(World& w, const TreePotential& g, const Rat& c) {
    if (c < 0) throw DomainError("negative scaling of a tree potential");
    std::vector<Atom> at;
    for (auto& a : g.atoms) at.push_back({a.v, a.mass * c});
    TreePotential r = make_potential(w, std::move(at));
    if (g.source) {
        auto src = g.source;
        r.source = [src, c](World& ww, const Valuation& v) { return times(src(ww, v), c); };
    }
    return r;
}

TreePotential add(World& w, const TreePotential& a, const TreePotential& b) {
    std::vector<Atom> at = a.atoms;
    at.insert(at.end(), b.atoms.begin(), b.atoms.end());
    TreePotential r = make_potential(w, std::move(at));
    if (a.source && b.source) {
        auto sa = a.source, sb = b.source;
        r.source = [sa, sb](World& ww, const Valuation& v) { return sa(ww, v) + sb(ww, v); };
    }
    return r;
}

Value eval_potential(World& w, const TreePotential& g, const Pos& p) {
    Rat s = 0;
    for (auto& a : g.atoms) {
        Pos m = w.ctx().meet(p, w.pos(a.v));
        if (m.inf) return Value::infinity();
        s += a.mass * w.ctx().phi(m);
    }
    return Value(s);
}

Value eval_potential(World& w, const TreePotential& g, const Valuation& v) { return eval_potential(w, g, w.pos(v)); }

TreePotential tree_transform_poly(World& w, const BivPoly& p) {
    if (p.is_zero()) throw DomainError("tree transform of the zero polynomial");
    std::vector<Atom> at;
    for (auto [e, n] : w.ends_of(p)) {
        int node = end_node(e);
        Valuation v = w.at(w.ctx().node_pos(node));
        if (BivPoly bp = w.branch_polynomial(e); !bp.is_zero()) v.carrier = bp;
        at.push_back({v, Rat(n * w.ctx().edge_mult(node) * w.ctx().degree(node))});
    }
    TreePotential g = make_potential(w, std::move(at));
    g.source = [p](World& ww, const Valuation& v) { return ww.eval(v, p); };
    return g;
}

TreePotential tree_transform_ideal(World& w, const std::vector<BivPoly>& gens_in) {
    std::vector<BivPoly> gens;
    for (auto& g : gens_in)
        if (!g.is_zero()) gens.push_back(g);
    if (gens.empty()) throw DomainError("tree transform of the zero ideal");
    BivPoly phi;
    for (auto& g : gens) phi = phi.is_zero() ? normalize(g) : gcd(phi, g);
    std::vector<Atom> at;
    if (!phi.is_constant()) at = tree_transform_poly(w, phi).atoms;
    std::vector<BivPoly> rest;
    bool primary = true;
    for (auto& g : gens) {
        rest.push_back(exact_div(g, phi));
        if (rest.back().constant_term() != 0) primary = false;
    }
    if (primary) {
        w.add_ideal(rest);
        for (auto& r : rest) w.ends_of(r);
        Context& c = w.ctx();
        int n = static_cast<int>(c.divisors().size());
        std::vector<Rat> val(n), ph(n), in(n);
        for (int E = 0; E < n; ++E) {
            val[E] = w.eval_ideal(w.divisorial(E), rest).v;
            ph[E] = c.phi(c.node_pos(E));
        }
        for (int E = 0; E < n; ++E) {
            int par = c.divisors()[E].parent;
            in[E] = par < 0 ? val[E] : (val[E] - val[par]) / (ph[E] - ph[par]);
        }
        std::vector<Rat> mass = in;
        for (int E = 0; E < n; ++E) {
            int par = c.divisors()[E].parent;
            if (par >= 0) mass[par] -= in[E];
        }
        for (int E = 0; E < n; ++E) {
            check(mass[E] >= 0, "negative Laplacian of an ideal potential");
            if (mass[E] > 0) at.push_back({w.divisorial(E), mass[E]});
        }
    }
    TreePotential g = make_potential(w, std::move(at));
    g.source = [gens](World& ww, const Valuation& v) { return ww.eval_ideal(v, gens); };
    // the measure must reproduce nu -> nu(I) on the whole node tree
    Context& c = w.ctx();
    int n = static_cast<int>(c.divisors().size());
    for (int E = 0; E < n; ++E) {
        Pos p = c.node_pos(E);
        check(eval_potential(w, g, p) == w.eval_ideal(w.divisorial(E), gens), "ideal potential differs at a node");
        int par = c.divisors()[E].parent;
        if (par < 0) continue;
        Pos mid = c.locate(E, (c.alpha(E) + c.alpha(par)) / 2);
        check(eval_potential(w, g, mid) == w.eval_ideal(w.at(mid), gens), "ideal potential differs on an edge");
    }
    return g;
}

TreePotential restrict_to_tree(World& w, const TreePotential& g, const std::vector<Valuation>& ends) {
    std::vector<Pos> tips{w.ctx().root_pos()};
    for (auto& e : ends) tips.push_back(w.pos(e));
    std::vector<Atom> at;
    for (auto& a : g.atoms) {
        Pos pa = w.pos(a.v), best = w.ctx().root_pos();
        for (auto& t : tips) {
            Pos m = w.ctx().meet(pa, t);
            if (w.ctx().leq(best, m)) best = m;
        }
        at.push_back({w.at(best), a.mass});
    }
    return make_potential(w, std::move(at));
}

SupportTree support_tree(World& w, const std::vector<Pos>& tips) {
    Context& c = w.ctx();
    std::vector<Pos> V{c.root_pos()};
    auto add = [&](const Pos& p) {
        for (auto& q : V)
            if (c.same(p, q)) return;
        V.push_back(p);
    };
    for (auto& t : tips) {
        for (int n : c.path_to(t.node)) {
            if (is_end_node(n)) continue;
            if (!t.inf && c.alpha(n) > t.alpha) break;
            add(c.node_pos(n));
        }
        add(t);
    }
    std::stable_sort(V.begin(), V.end(), [](const Pos& a, const Pos& b) {
        if (a.inf != b.inf) return b.inf;
        if (a.inf) return a.node > b.node;  // ends: by end id
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.node < b.node;
    });
    SupportTree s;
    s.vertices = V;
    s.parent.assign(V.size(), -1);
    for (size_t k = 1; k < V.size(); ++k) {
        int best = 0;
        for (size_t u = 0; u < V.size(); ++u) {
            if (u == k || !c.leq(V[u], V[k])) continue;
            if (c.leq(V[best], V[u])) best = static_cast<int>(u);
        }
        s.parent[k] = best;
    }
    return s;
}

ReductionTree finite_reduction_tree(World& w, const TreePotential& g, const Rat& eps) {
    if (eps <= 0 || eps >= 1) throw DomainError("epsilon must lie in (0, 1)");
    Context& c = w.ctx();
    ReductionTree r;
    auto holds = [&](const Pos& p) {
        Rat geo = mass_above(w, g, p) / Rat(c.pos_degree(p));
        return geo >= (1 - eps) * Rat(c.multiplicity(p));
    };
    if (!holds(c.root_pos())) {
        r.empty = true;
        return r;
    }
    auto tips = atom_positions(w, g);
    SupportTree s = support_tree(w, tips);
    std::vector<Pos> ends{c.root_pos()};
    for (auto& t : tips) {
        int k = 0;
        for (size_t i = 0; i < s.vertices.size(); ++i)
            if (c.same(s.vertices[i], t)) k = static_cast<int>(i);
        Pos last = c.root_pos();
        for (int v : vertex_path(s, k)) {
            if (v == 0) continue;
            if (!holds(s.vertices[v])) break;
            last = s.vertices[v];
        }
        ends.push_back(last);
    }
    // keep the maximal ones
    for (size_t i = 0; i < ends.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < ends.size() && !dominated; ++j) {
            if (i == j) continue;
            if (c.leq(ends[i], ends[j]) && (!c.same(ends[i], ends[j]) || j < i)) dominated = true;
        }
        if (!dominated) r.ends.push_back(w.at(ends[i]));
    }
    return r;
}

TreePotential reduce(World& w, const TreePotential& g, const ReductionTree& t) {
    if (t.empty) return TreePotential{};
    return restrict_to_tree(w, g, t.ends);
}

ChiReport chi_max(World& w, const TreePotential& h, const BivPoly& psi) {
    if (psi.is_zero()) throw DomainError("chi is undefined for psi = 0");
    Context& c = w.ctx();
    auto pends = w.ends_of(psi);
    std::vector<Pos> tips = atom_positions(w, h);
    for (auto [e, n] : pends) tips.push_back(c.node_pos(end_node(e)));
    SupportTree s = support_tree(w, tips);

    auto psi_at = [&](const Pos& p) {
        Rat v = 0;
        for (auto [e, n] : pends) v += Rat(n) * w.pair_with_end(p, e).v;
        return v;
    };
    struct Sample {
        Rat h, d;
    };
    auto sample = [&](const Pos& p) { return Sample{eval_potential(w, h, p).v, psi_at(p) + c.thinness(p)}; };

    ChiReport r;
    size_t n = s.vertices.size();
    std::vector<Rat> chi(n);
    for (size_t k = 0; k < n; ++k) {
        const Pos& p = s.vertices[k];
        if (p.inf) {
            Rat mh = 0, mp = 0;
            for (auto& a : h.atoms)
                if (c.same(w.pos(a.v), p)) mh += a.mass;
            for (auto [e, m] : pends)
                if (end_node(e) == p.node) mp += Rat(m * c.edge_mult(p.node) * c.degree(p.node));
            chi[k] = mh / (mp + Rat(c.edge_mult(p.node) * c.degree(p.node)));
        } else {
            Sample sm = sample(p);
            chi[k] = sm.h / sm.d;
        }
        r.vertices.push_back(w.at(p));
        r.values.push_back(Value(chi[k]));
    }
    // chi is a ratio of affine functions of alpha on each edge: monotone
    for (size_t k = 1; k < n; ++k) {
        int u = s.parent[k];
        const Pos& pu = s.vertices[u];
        Pos q = s.vertices[k].inf ? c.locate(s.vertices[k].node, pu.alpha + 1) : s.vertices[k];
        Sample a = sample(pu), b = sample(q);
        Rat det = (b.h - a.h) * a.d - (b.d - a.d) * a.h;
        EdgeCertificate ec{u, static_cast<int>(k), sign(det)};
        check(sign(chi[k] - chi[u]) == ec.sign, "edge certificate disagrees with the endpoint values");
        r.certificates.push_back(ec);
    }
    r.sup = *std::max_element(chi.begin(), chi.end());
    for (size_t k = 0; k < n; ++k)
        if (chi[k] == r.sup) r.argmax.push_back(r.vertices[k]);
    return r;
}

bool laplacian_roundtrip_check(World& w, const TreePotential& g) {
    Context& c = w.ctx();
    auto tips = atom_positions(w, g);
    SupportTree s = support_tree(w, tips);
    auto G = [&](const Pos& p) { return g.source ? g.source(w, w.at(p)) : eval_potential(w, g, p); };
    size_t n = s.vertices.size();
    std::vector<Rat> val(n), ph(n), in(n);
    for (size_t k = 0; k < n; ++k) {
        if (s.vertices[k].inf) continue;
        Value v = G(s.vertices[k]);
        if (v.inf) return false;
        val[k] = v.v;
        ph[k] = c.phi(s.vertices[k]);
    }
    in[0] = val[0];  // phi runs from 0 at the virtual base to 1 at the root
    for (size_t k = 1; k < n; ++k) {
        int u = s.parent[k];
        const Pos& pk = s.vertices[k];
        if (pk.inf) {
            Pos q1 = c.locate(pk.node, s.vertices[u].alpha + 1), q2 = c.locate(pk.node, s.vertices[u].alpha + 2);
            Value g1 = G(q1), g2 = G(q2);
            if (g1.inf || g2.inf) return false;
            Rat s1 = (g1.v - val[u]) / (c.phi(q1) - ph[u]), s2 = (g2.v - g1.v) / (c.phi(q2) - c.phi(q1));
            if (s1 != s2) return false;
            in[k] = s1;
        } else {
            in[k] = (val[k] - val[u]) / (ph[k] - ph[u]);
            Pos mid = c.locate(pk.node, (pk.alpha + s.vertices[u].alpha) / 2);
            Value gm = G(mid);
            if (gm.inf || gm.v * 2 != val[k] + val[u]) return false;
        }
    }
    std::vector<Rat> mass = in;
    for (size_t k = 1; k < n; ++k) mass[s.parent[k]] -= in[k];
    for (size_t k = 0; k < n; ++k) {
        Rat stored = 0;
        for (auto& a : g.atoms)
            if (c.same(w.pos(a.v), s.vertices[k])) stored += a.mass;
        if (stored != mass[k]) return false;
    }
    return true;
}

std::string measure_json(World& w, const TreePotential& g) {
    nlohmann::json j = nlohmann::json::array();
    for (auto& a : g.atoms) j.push_back({{"valuation", nlohmann::json::parse(w.json(a.v))}, {"mass", to_string(a.mass)}});
    return j.dump();
}

std::string chi_json(World& w, const ChiReport& r) {
    nlohmann::json j;
    j["sup"] = to_string(r.sup);
    nlohmann::json am = nlohmann::json::array();
    for (auto& v : r.argmax) am.push_back(nlohmann::json::parse(w.json(v)));
    j["argmax"] = am;
    return j.dump();
}

}  // namespace valmult
