#include "valmult/audit.hpp"

#include "valmult/potential.hpp"

namespace valmult {

namespace {

thread_local bool t_inside = false;

void note(AuditReport& r, std::string what) {
    ++r.failure_count;
    if (r.failures.size() < 8) r.failures.push_back(std::move(what));
}

void divisor_checks(Context& c, AuditReport& r) {
    for (auto& d : c.divisors()) {
        ++r.divisors;
        std::string tag = "E" + std::to_string(d.id) + ": ";
        if (d.A != rat(d.a, d.b)) note(r, tag + "A differs from a/b");
        long bx = c.divisor_value(d.id, BivPoly::x()), by = c.divisor_value(d.id, BivPoly::y());
        if (std::min(bx, by) != d.b || d.cluster_mults.empty() || d.cluster_mults.front() != d.b)
            note(r, tag + "generic multiplicity read three ways disagrees");
        Rat s = 0;
        for (long m : d.cluster_mults) s += Rat(m * m);
        if (d.alpha * Rat(d.b * d.b) != s) note(r, tag + "skewness differs from the cluster sum");
        if (d.A < 1 + d.alpha) note(r, tag + "A below 1 + alpha");
        if (d.parent < 0) {
            if (d.A != 2 || d.alpha != 1) note(r, tag + "root data");
            continue;
        }
        // A = 2 + integral of m d alpha: along the edge the slope must be an
        // integer multiplicity dividing b and divisible by the parent's
        const auto& p = c.divisors()[d.parent];
        Rat m = (d.A - p.A) / (d.alpha - p.alpha);
        if (!(d.alpha > p.alpha) || !is_integer(m) || m < 1) {
            note(r, tag + "edge multiplicity is not a positive integer");
            continue;
        }
        long mi = to_long(m.get_num());
        long mp = d.parent == 0 ? 1 : c.multiplicity(c.node_pos(d.parent));
        if (d.b % mi != 0 || mi % mp != 0) note(r, tag + "edge multiplicity fails divisibility");
        if ((d.A == 1 + d.alpha) != (mi == 1)) note(r, tag + "A = 1 + alpha exactly when m = 1 fails");
    }
}

void noether_checks(const Context& c, AuditReport& r) {
    std::vector<int> curves;
    for (int o = 0; o < c.object_count(); ++o) {
        auto& ob = c.object(o);
        if (ob.kind == ObjectKind::Curve && !ob.retired && ob.gens.size() == 1) curves.push_back(o);
    }
    for (size_t i = 0; i < curves.size(); ++i)
        for (size_t j = i + 1; j < curves.size(); ++j) {
            const BivPoly &f = c.object(curves[i]).gens[0], &g = c.object(curves[j]).gens[0];
            if (!gcd(f, g).is_constant()) continue;
            ++r.pairings;
            Value I = intersection_multiplicity(f, g);
            if (I.inf || Rat(noether_pairing(c, curves[i], curves[j])) != I.v)
                note(r, "noether pairing of " + to_string(f) + " and " + to_string(g) + " differs from the resultant");
        }
}

void laplacian_checks(const Context& c, AuditReport& r) {
    for (int o = 0; o < c.object_count(); ++o) {
        auto& ob = c.object(o);
        if (ob.retired) continue;
        World w(std::make_shared<Context>(c));
        TreePotential g =
            ob.kind == ObjectKind::Ideal ? tree_transform_ideal(w, ob.gens) : tree_transform_poly(w, ob.gens[0]);
        ++r.potentials;
        if (!laplacian_roundtrip_check(w, g)) note(r, "laplacian round trip fails for object " + std::to_string(o));
    }
}

}  // namespace

void AuditReport::merge(const AuditReport& o) {
    contexts += o.contexts;
    divisors += o.divisors;
    pairings += o.pairings;
    potentials += o.potentials;
    failure_count += o.failure_count;
    for (auto& f : o.failures)
        if (failures.size() < 8) failures.push_back(f);
}

AuditReport audit_context(const Context& c) {
    AuditReport r;
    r.contexts = 1;
    bool outer = !t_inside;
    t_inside = true;
    try {
        Context copy(c);
        divisor_checks(copy, r);
        noether_checks(c, r);
        laplacian_checks(c, r);
    } catch (const std::exception& e) {
        note(r, std::string("audit raised: ") + e.what());
    }
    if (outer) t_inside = false;
    return r;
}

struct AuditScope::State {
    mutable std::mutex mu;
    AuditReport total;
};

AuditScope::AuditScope() : st_(std::make_shared<State>()) {
    auto st = st_;
    set_context_observer([st](const Context& c) {
        if (t_inside) return;  // contexts made by the audit itself
        AuditReport r = audit_context(c);
        std::lock_guard<std::mutex> lk(st->mu);
        st->total.merge(r);
    });
}

AuditScope::~AuditScope() { set_context_observer(nullptr); }

AuditReport AuditScope::report() const {
    std::lock_guard<std::mutex> lk(st_->mu);
    return st_->total;
}

}  // namespace valmult
