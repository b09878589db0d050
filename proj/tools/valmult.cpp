// valmult: command line front end. Every subcommand builds a json report;
// the text format is rendered from that report.
#include "valmult/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace valmult;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kDomain = 1, kViolation = 2, kResource = 3, kUsage = 64, kInternal = 70 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inputs {
    std::string poly, ideal, val, c = "1", t, eps, jumps, kind = "power", path = "resolution";
    int k0 = 1;
    long max_blowups = 4000;
    std::uint64_t seed = 1;
    int cases = -1, workers = 0, extra = 1;
};

std::vector<BivPoly> split_ideal(const std::string& s) {
    std::vector<BivPoly> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_poly(part));
    if (out.empty()) throw UsageError("empty generator list");
    return out;
}

// --poly and --ideal name the same thing: a list of generators
std::vector<BivPoly> target(const Inputs& in) {
    if (!in.poly.empty() && !in.ideal.empty()) throw UsageError("give either --poly or --ideal");
    if (!in.poly.empty()) return {parse_poly(in.poly)};
    if (!in.ideal.empty()) return split_ideal(in.ideal);
    throw UsageError("missing --poly or --ideal");
}

Rat need_rat(const std::string& s, const char* flag) {
    if (s.empty()) throw UsageError(std::string("missing ") + flag);
    return parse_rat(s);
}

std::string value_text(const Value& v) { return v.inf ? "inf" : to_string(v.v); }

json mult_json(const MultiplierIdealResult& J) { return json::parse(result_json(J)); }

json run_resolve(const Inputs& in) {
    auto t = log_resolution(target(in), in.max_blowups);
    json j = json::parse(resolution_json(t));
    j["command"] = "resolve";
    return j;
}

json run_eval(const Inputs& in) {
    World w(in.max_blowups);
    auto gens = target(in);
    json j{{"command", "eval"}};
    if (!in.val.empty()) {
        Valuation v = w.parse(in.val);
        j["valuation"] = json::parse(w.json(v));
        j["value"] = value_text(gens.size() == 1 ? w.eval(v, gens[0]) : w.eval_ideal(v, gens));
        j["alpha"] = value_text(w.alpha(v));
        j["thinness"] = value_text(w.thinness(v));
        return j;
    }
    // no valuation: describe the tree potential c * g_I
    Rat c = need_rat(in.c, "--c");
    auto h = scale(w, tree_transform_ideal(w, gens), c);
    j["measure"] = json::parse(measure_json(w, h));
    j["total_mass"] = to_string(total_mass(h));
    if (!h.atoms.empty()) j["chi"] = json::parse(chi_json(w, chi_max(w, h, BivPoly(1))));
    if (!in.eps.empty()) {
        auto tr = finite_reduction_tree(w, h, parse_rat(in.eps));
        json ends = json::array();
        for (auto& e : tr.ends) ends.push_back(json::parse(w.json(e)));
        j["reduction_tree"] = {{"empty", tr.empty}, {"ends", ends}};
    }
    return j;
}

json run_lct(const Inputs& in) {
    auto gens = target(in);
    Rat c = lct(IdealPresentation(gens), in.max_blowups);
    World w(in.max_blowups);
    Rat lam = arnold(w, tree_transform_ideal(w, gens));
    json j{{"command", "lct"}, {"lct", to_string(c)}, {"arnold", to_string(lam)}};
    if (!in.jumps.empty()) {
        json js = json::array();
        for (auto& x : jumping_numbers(IdealPresentation(gens), parse_rat(in.jumps), in.max_blowups)) js.push_back(to_string(x));
        j["jumping_numbers"] = js;
    }
    return j;
}

json run_mult_ideal(const Inputs& in) {
    auto gens = target(in);
    Rat c = need_rat(in.c, "--c");
    MultiplierIdealResult J;
    if (in.path == "resolution") {
        J = multiplier_ideal_resolution(IdealPresentation(gens), c, in.max_blowups);
    } else if (in.path == "lipman") {
        J = multiplier_ideal_lipman(IdealPresentation(gens), c, in.extra, in.max_blowups);
    } else if (in.path == "potential") {
        World w(in.max_blowups);
        J = multiplier_ideal_potential(w, scale(w, tree_transform_ideal(w, gens), c));
    } else {
        throw UsageError("--path must be resolution, potential or lipman");
    }
    json j = mult_json(J);
    j["command"] = "mult-ideal";
    j["c"] = to_string(c);
    j["lct"] = to_string(lct(IdealPresentation(gens), in.max_blowups));
    return j;
}

json run_factor(const Inputs& in) {
    World w(in.max_blowups);
    auto z = zariski_factor(w, target(in));
    json rees = json::array();
    for (auto& r : z.rees)
        rees.push_back({{"valuation", json::parse(w.json(r.v))}, {"n", r.n}, {"b", r.b}, {"degree", r.degree}});
    return {{"command", "factor"}, {"principal", to_string(z.principal)}, {"rees", rees}};
}

json run_invert(const Inputs& in) {
    World w(in.max_blowups);
    auto g = inverse_problem(w, target(in));
    auto J = multiplier_ideal_potential(w, g);
    return {{"command", "invert"}, {"measure", json::parse(measure_json(w, g))}, {"ideal", mult_json(J)}};
}

json run_approx(const Inputs& in) {
    World w(in.max_blowups);
    Rat c = need_rat(in.c, "--c");
    auto h = scale(w, tree_transform_ideal(w, target(in)), c);
    auto rep = equisingular_approx(w, h, need_rat(in.t, "--t"));
    return {{"command", "approx"},
            {"t", in.t},
            {"ok", rep.ok()},
            {"points", rep.points},
            {"failures", rep.failures},
            {"measure", json::parse(measure_json(w, rep.ht))},
            {"ideal", mult_json(rep.J)}};
}

json run_graded(const Inputs& in) {
    World w(in.max_blowups);
    GradedSystem G;
    if (in.kind == "valuation") {
        if (in.val.empty()) throw UsageError("valuation systems need --val");
        G.kind = GradedKind::Valuation;
        G.v = w.parse(in.val);
    } else if (in.kind == "power") {
        G.kind = GradedKind::Power;
        G.ideal = target(in);
        G.k0 = in.k0;
    } else {
        throw UsageError("--kind must be valuation or power");
    }
    auto r = graded_asymptotic(w, G, need_rat(in.c, "--c"));
    return {{"command", "graded"},
            {"kind", in.kind},
            {"measure", json::parse(measure_json(w, r.g))},
            {"lct", to_string(r.lct)},
            {"ideal", mult_json(r.J)}};
}

json run_harness(const Inputs& in) {
    HarnessSizes sz;
    if (in.cases >= 0) {
        sz.two_path = sz.lipman = sz.subadditivity = sz.skoda_curve = sz.semicontinuity = sz.acc = in.cases;
        sz.skoda_ideal = std::min(in.cases, 5);
        sz.family = std::min(in.cases, 20);
    }
    sz.workers = in.workers;
    auto rep = property_harness(in.seed, sz);
    json j = json::parse(rep.json());
    j["command"] = "harness";
    return j;
}

// ---- text rendering, a function of the json report only ----

std::string val_text(const json& v) {
    std::string k = v.value("kind", "");
    if (k == "multiplicity") return "m";
    if (k == "curve") return "curve:" + v.value("branch", "?");
    std::string s = k + ":" + (v.contains("branch") ? v["branch"].get<std::string>() : "#" + std::to_string(v.value("node", v.value("divisor", -1))));
    return s + ":" + v.value("t", "");
}

void measure_text(std::ostream& os, const json& m) {
    if (m.empty()) os << "measure: 0\n";
    for (auto& a : m) os << "mass " << a["mass"].get<std::string>() << " at " << val_text(a["valuation"]) << "\n";
}

void ideal_text(std::ostream& os, const json& j) {
    os << "generators: ";
    bool first = true;
    for (auto& g : j["generators"]) {
        os << (first ? "" : ", ") << g.get<std::string>();
        first = false;
    }
    os << "\ncontainment_order: " << j["containment_order"].get<int>() << "\n";
    for (auto& c : j["conditions"]) os << "ord_E" << c["divisor"].get<int>() << " >= " << c["threshold"].get<long>() << "\n";
    for (auto& c : j["curve_conditions"]) os << "factor (" << c["curve"].get<std::string>() << ")^" << c["exponent"].get<long>() << "\n";
}

std::string render_text(const json& j) {
    std::ostringstream os;
    std::string cmd = j["command"];
    if (cmd == "lct") {
        os << j["lct"].get<std::string>() << "\n";
        if (j.contains("jumping_numbers")) {
            os << "jumping numbers:";
            for (auto& x : j["jumping_numbers"]) os << " " << x.get<std::string>();
            os << "\n";
        }
    } else if (cmd == "eval" && j.contains("value")) {
        os << j["value"].get<std::string>() << "\n";
    } else if (cmd == "eval") {
        measure_text(os, j["measure"]);
        if (j.contains("chi")) os << "arnold: " << j["chi"]["sup"].get<std::string>() << "\n";
        if (j.contains("reduction_tree")) {
            auto& t = j["reduction_tree"];
            if (t["empty"].get<bool>()) os << "reduction tree: empty\n";
            for (auto& e : t["ends"]) os << "reduction end " << val_text(e) << "\n";
        }
    } else if (cmd == "mult-ideal") {
        ideal_text(os, j);
    } else if (cmd == "resolve") {
        for (auto& d : j["divisors"])
            os << "E" << d["id"].get<int>() << " parent " << d["parent"].get<int>() << " a " << d["a"].get<long>()
               << " b " << d["b"].get<long>() << " alpha " << d["alpha"].get<std::string>() << " r " << d["r"].get<long>() << "\n";
    } else if (cmd == "factor") {
        os << "principal: " << j["principal"].get<std::string>() << "\n";
        for (auto& r : j["rees"]) os << "rees " << val_text(r["valuation"]) << " n " << r["n"].get<int>() << " b " << r["b"].get<long>() << "\n";
    } else if (cmd == "invert" || cmd == "graded") {
        measure_text(os, j["measure"]);
        if (j.contains("lct")) os << "lct: " << j["lct"].get<std::string>() << "\n";
        ideal_text(os, j["ideal"]);
    } else if (cmd == "approx") {
        os << (j["ok"].get<bool>() ? "sandwich holds" : "sandwich FAILS") << " at " << j["points"].get<long>() << " points\n";
        for (auto& f : j["failures"]) os << "  " << f.get<std::string>() << "\n";
        measure_text(os, j["measure"]);
        ideal_text(os, j["ideal"]);
    } else if (cmd == "harness") {
        os << "seed " << j["seed"].get<std::uint64_t>() << "\n";
        for (auto& s : j["suites"]) {
            bool ok = s["cases"] == s["passed"];
            os << (ok ? "pass " : "FAIL ") << s["name"].get<std::string>() << " " << s["passed"].get<int>() << "/" << s["cases"].get<int>() << "\n";
            if (!ok) os << "  counterexample: " << s["counterexample"]["input"].get<std::string>() << "\n  " << s["counterexample"]["detail"].get<std::string>() << "\n";
        }
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact valuative tree computations: resolutions, tree potentials, multiplier ideals"};
    app.require_subcommand(1);
    app.fallthrough();
    Inputs in;
    std::string format = "text", out;
    app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--out", out, "write the report to this file");
    app.add_option("--max-blowups", in.max_blowups, "resource ceiling for point blowups");

    auto target_opts = [&](CLI::App* s) {
        s->add_option("--poly", in.poly, "polynomial, e.g. \"y^2 - x^3\"");
        s->add_option("--ideal", in.ideal, "comma separated generators");
    };
    auto* resolve = app.add_subcommand("resolve", "log resolution and divisor invariants");
    target_opts(resolve);
    auto* eval = app.add_subcommand("eval", "evaluate a valuation, or describe the potential c*g_I");
    target_opts(eval);
    eval->add_option("--val", in.val, valuation_grammar());
    eval->add_option("--c", in.c, "scale p/q");
    eval->add_option("--eps", in.eps, "reduction tree parameter in (0,1)");
    auto* lctc = app.add_subcommand("lct", "log canonical threshold");
    target_opts(lctc);
    lctc->add_option("--jumps", in.jumps, "also list jumping numbers up to p/q");
    auto* mi = app.add_subcommand("mult-ideal", "multiplier ideal J(I^c)");
    target_opts(mi);
    mi->add_option("--c", in.c, "exponent p/q");
    mi->add_option("--path", in.path, "resolution, potential or lipman");
    mi->add_option("--extra", in.extra, "free blowups per divisor on the lipman path");
    auto* fac = app.add_subcommand("factor", "Zariski factorization of the integral closure");
    target_opts(fac);
    auto* inv = app.add_subcommand("invert", "tree potential g with J(g) equal to the closure of the ideal");
    target_opts(inv);
    auto* apx = app.add_subcommand("approx", "equisingular approximation of c*g_I at level t");
    target_opts(apx);
    apx->add_option("--c", in.c, "scale p/q");
    apx->add_option("--t", in.t, "level p/q")->required();
    auto* gr = app.add_subcommand("graded", "asymptotic multiplier ideal of a graded system");
    target_opts(gr);
    gr->add_option("--kind", in.kind, "valuation or power");
    gr->add_option("--val", in.val, "valuation of a valuation system");
    gr->add_option("--k0", in.k0, "first index of a power system");
    gr->add_option("--c", in.c, "exponent p/q");
    auto* hn = app.add_subcommand("harness", "seeded property suites");
    hn->add_option("--seed", in.seed, "seed (default 1)");
    hn->add_option("--cases", in.cases, "cases per suite");
    hn->add_option("--workers", in.workers, "worker threads (0: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    json report;
    int rc = kOk;
    try {
        if (*resolve) report = run_resolve(in);
        else if (*eval) report = run_eval(in);
        else if (*lctc) report = run_lct(in);
        else if (*mi) report = run_mult_ideal(in);
        else if (*fac) report = run_factor(in);
        else if (*inv) report = run_invert(in);
        else if (*apx) report = run_approx(in);
        else if (*gr) report = run_graded(in);
        else report = run_harness(in);
        if (report["command"] == "harness" && !report["ok"].get<bool>()) rc = kViolation;
        if (report["command"] == "approx" && !report["ok"].get<bool>()) rc = kViolation;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << " at offset " << e.offset << "\n" << poly_grammar() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }

    std::string text = format == "json" ? report.dump(2) + "\n" : render_text(report);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) {
            std::cerr << "cannot write " << out << "\n";
            return kDomain;
        }
        f << text;
    }
    return rc;
}
