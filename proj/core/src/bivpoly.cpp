#include "valmult/bivpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace valmult {

BivPoly::BivPoly(const Rat& c) {
    if (c != 0) terms[{0, 0}] = c;
}

BivPoly BivPoly::monomial(const Rat& c, int i, int j) {
    BivPoly p;
    if (c != 0) p.terms[{i, j}] = c;
    return p;
}

bool BivPoly::is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first == Mono{0, 0}); }

Rat BivPoly::coeff(int i, int j) const {
    auto it = terms.find({i, j});
    return it == terms.end() ? Rat(0) : it->second;
}

int BivPoly::total_degree() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.first + m.second);
    return d;
}

int BivPoly::order() const {
    if (terms.empty()) throw DomainError("zero polynomial has infinite order");
    int d = terms.begin()->first.first + terms.begin()->first.second;
    for (auto& [m, c] : terms) d = std::min(d, m.first + m.second);
    return d;
}

int BivPoly::deg_x() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.first);
    return d;
}

int BivPoly::deg_y() const {
    int d = -1;
    for (auto& [m, c] : terms) d = std::max(d, m.second);
    return d;
}

BivPoly BivPoly::lowest_form() const {
    BivPoly r;
    int o = order();
    for (auto& [m, c] : terms)
        if (m.first + m.second == o) r.terms[m] = c;
    return r;
}

void BivPoly::add_term(int i, int j, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms.try_emplace({i, j}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

BivPoly BivPoly::operator-() const {
    BivPoly r = *this;
    for (auto& [m, c] : r.terms) c = -c;
    return r;
}

BivPoly& BivPoly::operator+=(const BivPoly& o) {
    for (auto& [m, c] : o.terms) add_term(m.first, m.second, c);
    return *this;
}

BivPoly& BivPoly::operator-=(const BivPoly& o) {
    for (auto& [m, c] : o.terms) add_term(m.first, m.second, -c);
    return *this;
}

BivPoly& BivPoly::operator*=(const Rat& s) {
    if (s == 0) {
        terms.clear();
        return *this;
    }
    for (auto& [m, c] : terms) c *= s;
    return *this;
}

std::vector<UPoly> BivPoly::y_coeffs() const {
    std::vector<UPoly> r(std::max(deg_y() + 1, 0));
    for (auto& [m, c] : terms) r[m.second] += UPoly::monomial(c, m.first);
    return r;
}

BivPoly BivPoly::from_y_coeffs(const std::vector<UPoly>& cs) {
    BivPoly p;
    for (size_t j = 0; j < cs.size(); ++j)
        for (size_t i = 0; i < cs[j].c.size(); ++i) p.add_term(static_cast<int>(i), static_cast<int>(j), cs[j].c[i]);
    return p;
}

std::vector<UPoly> BivPoly::x_coeffs() const {
    std::vector<UPoly> r(std::max(deg_x() + 1, 0));
    for (auto& [m, c] : terms) r[m.first] += UPoly::monomial(c, m.second);
    return r;
}

BivPoly BivPoly::shear_x(const Rat& lambda) const {
    if (lambda == 0) return *this;
    // (x + l*y)^i = sum_k C(i,k) x^k (l*y)^(i-k)
    BivPoly r;
    for (auto& [m, c] : terms) {
        auto [i, j] = m;
        Int binom = 1;
        Rat lp = 1;
        for (int t = 0; t <= i; ++t) {
            // t = power of (l*y); x exponent i - t
            r.add_term(i - t, j + t, c * Rat(binom) * lp);
            binom = binom * (i - t) / (t + 1);
            lp *= lambda;
        }
    }
    return r;
}

BivPoly BivPoly::swap_xy() const {
    BivPoly r;
    for (auto& [m, c] : terms) r.terms[{m.second, m.first}] = c;
    return r;
}

BivPoly BivPoly::truncate(int d) const {
    BivPoly r;
    for (auto& [m, c] : terms)
        if (m.first + m.second <= d) r.terms[m] = c;
    return r;
}

BivPoly operator+(BivPoly a, const BivPoly& b) { return a += b; }
BivPoly operator-(BivPoly a, const BivPoly& b) { return a -= b; }
BivPoly operator*(BivPoly a, const Rat& c) { return a *= c; }

BivPoly operator*(const BivPoly& a, const BivPoly& b) {
    BivPoly r;
    for (auto& [m1, c1] : a.terms)
        for (auto& [m2, c2] : b.terms) r.add_term(m1.first + m2.first, m1.second + m2.second, c1 * c2);
    return r;
}

BivPoly pow(const BivPoly& a, int e) {
    BivPoly r(Rat(1)), base = a;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

namespace {

bool is_zero_all(const std::vector<UPoly>& v) {
    for (auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

void trim_y(std::vector<UPoly>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

UPoly content(const std::vector<UPoly>& v) {
    UPoly g;
    for (auto& p : v) g = gcd(g, p);
    return g;
}

std::vector<UPoly> divide_all(std::vector<UPoly> v, const UPoly& d) {
    for (auto& p : v) p = p / d;
    return v;
}

// lc(b)^k * a mod b, as polynomials in y over Q[x].
std::vector<UPoly> prem(std::vector<UPoly> a, const std::vector<UPoly>& b) {
    const UPoly& lb = b.back();
    int db = static_cast<int>(b.size()) - 1;
    while ((int)a.size() - 1 >= db && !a.empty()) {
        int k = static_cast<int>(a.size()) - 1 - db;
        UPoly la = a.back();
        for (auto& p : a) p = p * lb;
        for (int j = 0; j <= db; ++j) a[k + j] -= la * b[j];
        trim_y(a);
    }
    return a;
}

}  // namespace

bool divides(const BivPoly& d, const BivPoly& a, BivPoly* quotient) {
    if (d.is_zero()) throw DomainError("division by zero polynomial");
    auto r = a.y_coeffs();
    auto b = d.y_coeffs();
    int db = static_cast<int>(b.size()) - 1;
    std::vector<UPoly> q(std::max<int>((int)r.size() - db, 0));
    while (!r.empty() && (int)r.size() - 1 >= db) {
        int k = static_cast<int>(r.size()) - 1 - db;
        auto [qq, rr] = divmod(r.back(), b.back());
        if (!rr.is_zero()) return false;
        q[k] = qq;
        for (int j = 0; j <= db; ++j) r[k + j] -= qq * b[j];
        trim_y(r);
    }
    if (!is_zero_all(r)) return false;
    if (quotient) *quotient = BivPoly::from_y_coeffs(q);
    return true;
}

BivPoly exact_div(const BivPoly& a, const BivPoly& b) {
    BivPoly q;
    check(divides(b, a, &q), "inexact bivariate division");
    return q;
}

BivPoly normalize(const BivPoly& a) {
    if (a.is_zero()) return a;
    // leading term in (y-degree, x-degree) order
    Mono best = a.terms.begin()->first;
    for (auto& [m, c] : a.terms)
        if (m.second > best.second || (m.second == best.second && m.first > best.first)) best = m;
    return a * (1 / a.terms.at(best));
}

BivPoly gcd(const BivPoly& a, const BivPoly& b) {
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);
    auto ya = a.y_coeffs(), yb = b.y_coeffs();
    UPoly ca = content(ya), cb = content(yb);
    UPoly cg = gcd(ca, cb);
    auto A = divide_all(ya, ca), B = divide_all(yb, cb);
    if (A.size() < B.size()) std::swap(A, B);
    std::vector<UPoly> g;
    for (;;) {
        if (B.size() == 1) {
            g = {UPoly(Rat(1))};
            break;
        }
        auto R = prem(A, B);
        if (R.empty()) {
            g = B;
            break;
        }
        A = B;
        B = divide_all(R, content(R));
    }
    for (auto& p : g) p = p * cg;
    return normalize(BivPoly::from_y_coeffs(g));
}

BivPoly squarefree_part(const BivPoly& a) {
    if (a.is_constant()) return a.is_zero() ? a : BivPoly(Rat(1));
    BivPoly px, py;
    for (auto& [m, c] : a.terms) {
        if (m.first > 0) px.add_term(m.first - 1, m.second, c * m.first);
        if (m.second > 0) py.add_term(m.first, m.second - 1, c * m.second);
    }
    BivPoly g = gcd(a, gcd(px, py));
    return normalize(exact_div(a, g));
}

// ---- parser ----

ParseError::ParseError(const std::string& msg, size_t off)
    : DomainError("syntax error at byte " + std::to_string(off) + ": " + msg), offset(off) {}

const char* poly_grammar() {
    return "poly   := term (('+' | '-') term)*\n"
           "term   := unary ('*' unary)*\n"
           "unary  := ('+' | '-') unary | power\n"
           "power  := atom ('^' digits)?\n"
           "atom   := digits ('/' digits)? | 'x' | 'y' | '(' poly ')'\n"
           "implicit multiplication is not allowed; exponents are nonnegative integers <= 4096\n";
}

namespace {

constexpr int kMaxExponent = 4096;
constexpr int kMaxDegree = 100000;

struct Parser {
    const std::string& s;
    size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i); }

    std::string digits() {
        skip();
        size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (st == i) fail("expected digits");
        return s.substr(st, i - st);
    }

    BivPoly poly() {
        BivPoly r = term();
        for (;;) {
            if (peek('+')) {
                ++i;
                r += term();
            } else if (peek('-')) {
                ++i;
                r -= term();
            } else {
                return r;
            }
        }
    }
    BivPoly term() {
        BivPoly r = unary();
        while (peek('*')) {
            ++i;
            r = r * unary();
            if (r.total_degree() > kMaxDegree) fail("degree overflow");
        }
        return r;
    }
    BivPoly unary() {
        if (peek('-')) {
            ++i;
            return -unary();
        }
        if (peek('+')) {
            ++i;
            return unary();
        }
        return power();
    }
    BivPoly power() {
        BivPoly base = atom();
        if (peek('^')) {
            ++i;
            skip();
            size_t at = i;
            if (i < s.size() && s[i] == '/') fail("division token inside an exponent");
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("exponent must be a nonnegative integer");
            std::string d = digits();
            if (peek('/')) fail("division token inside an exponent");
            if (d.size() > 6 || std::stol(d) > kMaxExponent) throw ParseError("exponent overflow", at);
            int e = static_cast<int>(std::stol(d));
            int deg = std::max(base.total_degree(), 0);
            if ((long)deg * e > kMaxDegree) throw ParseError("exponent overflow", at);
            if (peek('^')) fail("chained exponents are ambiguous; use parentheses");
            return pow(base, e);
        }
        return base;
    }
    BivPoly atom() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string n = digits();
            if (peek('/')) {
                ++i;
                skip();
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected denominator digits");
                size_t at = i;
                std::string d = digits();
                if (Int(d) == 0) throw ParseError("zero denominator", at);
                Rat q{Int(n), Int(d)};
                q.canonicalize();
                return BivPoly(q);
            }
            return BivPoly(Rat(Int(n)));
        }
        if (c == 'x') {
            ++i;
            return BivPoly::x();
        }
        if (c == 'y') {
            ++i;
            return BivPoly::y();
        }
        if (c == '(') {
            ++i;
            BivPoly r = poly();
            if (!peek(')')) fail("expected ')'");
            ++i;
            return r;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

std::string mono_str(int i, int j) {
    std::string r;
    if (i > 0) r += i == 1 ? "x" : "x^" + std::to_string(i);
    if (j > 0) {
        if (!r.empty()) r += "*";
        r += j == 1 ? "y" : "y^" + std::to_string(j);
    }
    return r;
}

}  // namespace

BivPoly parse_poly(const std::string& text) {
    Parser p{text};
    p.skip();
    if (p.i >= text.size()) throw ParseError("empty input", 0);
    BivPoly r = p.poly();
    p.skip();
    if (p.i != text.size()) p.fail(std::string("unexpected character '") + text[p.i] + "' (implicit multiplication is not allowed)");
    return r;
}

std::string to_string(const BivPoly& p) {
    if (p.is_zero()) return "0";
    std::vector<std::pair<Mono, Rat>> ts(p.terms.begin(), p.terms.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da > db;
        return a.first.first > b.first.first;
    });
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : ts) {
        Rat mag = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        std::string ms = mono_str(m.first, m.second);
        if (ms.empty())
            os << to_string(mag);
        else if (mag == 1)
            os << ms;
        else
            os << to_string(mag) << "*" << ms;
    }
    return os.str();
}

int mult_at_origin(const BivPoly& p) { return p.order(); }

namespace {

Rat det(std::vector<std::vector<Rat>> M) {
    size_t n = M.size();
    Rat d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && M[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(M[piv], M[c]);
            d = -d;
        }
        d *= M[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (M[r][c] == 0) continue;
            Rat f = M[r][c] / M[c][c];
            for (size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
        }
    }
    return d;
}

}  // namespace

UPoly resultant_elim_y(const BivPoly& p, const BivPoly& q) {
    if (p.deg_y() < 1 || q.deg_y() < 1) throw DomainError("resultant needs positive degree in y");
    auto P = p.y_coeffs(), Q = q.y_coeffs();
    int n = p.deg_y(), m = q.deg_y();
    int dxp = 0, dxq = 0;
    for (auto& c : P) dxp = std::max(dxp, c.deg());
    for (auto& c : Q) dxq = std::max(dxq, c.deg());
    int bound = m * dxp + n * dxq;
    std::vector<Rat> xs, ys;
    for (int t = 0; t <= bound; ++t) {
        Rat x0(t);
        std::vector<std::vector<Rat>> M(n + m, std::vector<Rat>(n + m, Rat(0)));
        for (int r = 0; r < m; ++r)
            for (int k = 0; k <= n; ++k) M[r][r + k] = P[n - k].eval(x0);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k <= m; ++k) M[m + r][r + k] = Q[m - k].eval(x0);
        xs.push_back(x0);
        ys.push_back(det(std::move(M)));
    }
    return interpolate(xs, ys);
}

IntersectionResult intersection_multiplicity_ex(const BivPoly& p0, const BivPoly& q0) {
    if (p0.is_zero() || q0.is_zero()) throw DomainError("intersection multiplicity of the zero polynomial");
    if (p0.constant_term() != 0 || q0.constant_term() != 0)
        throw DomainError("intersection multiplicity needs both curves through the origin");
    BivPoly p = p0, q = q0;
    BivPoly g = gcd(p, q);
    if (!g.is_constant()) {
        if (g.constant_term() == 0) return {Value::infinity(), 0};
        p = exact_div(p, g);
        q = exact_div(q, g);
    }
    for (int lambda = 0; lambda < 200; ++lambda) {
        BivPoly P = p.shear_x(lambda), Q = q.shear_x(lambda);
        if (!P.y_coeffs().back().is_zero() && P.y_coeffs().back().deg() != 0) continue;
        if (Q.y_coeffs().back().deg() != 0) continue;
        if (P.deg_y() < 1 || Q.deg_y() < 1) continue;
        auto xp = P.x_coeffs(), xq = Q.x_coeffs();
        UPoly a = xp.empty() ? UPoly() : xp[0], b = xq.empty() ? UPoly() : xq[0];
        UPoly h = gcd(a, b);
        if (h.is_zero() || !(h == UPoly::monomial(1, h.deg()))) continue;
        UPoly R = resultant_elim_y(P, Q);
        check(!R.is_zero(), "resultant vanished for coprime inputs");
        return {Value(Rat(R.ord())), lambda};
    }
    throw ResourceError("no regularizing shear found");
}

Value intersection_multiplicity(const BivPoly& p, const BivPoly& q) { return intersection_multiplicity_ex(p, q).value; }

FactorBase coprime_base(const std::vector<BivPoly>& polys) {
    std::vector<BivPoly> work;
    for (auto& p : polys)
        if (!p.is_constant()) work.push_back(normalize(p));
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < work.size() && !changed; ++i) {
            BivPoly s = squarefree_part(work[i]);
            if (s != work[i]) {
                BivPoly rest = exact_div(work[i], s);
                work[i] = s;
                if (!rest.is_constant()) work.push_back(normalize(rest));
                changed = true;
                break;
            }
            for (size_t j = i + 1; j < work.size(); ++j) {
                BivPoly g = gcd(work[i], work[j]);
                if (g.is_constant()) continue;
                BivPoly a = exact_div(work[i], g), b = exact_div(work[j], g);
                if (g == work[i] && g == work[j]) {
                    work.erase(work.begin() + j);
                } else {
                    std::vector<BivPoly> nw;
                    for (size_t k = 0; k < work.size(); ++k)
                        if (k != i && k != j) nw.push_back(work[k]);
                    for (auto* t : {&a, &b, &g})
                        if (!t->is_constant()) nw.push_back(normalize(*t));
                    work = nw;
                }
                changed = true;
                break;
            }
        }
    }
    std::sort(work.begin(), work.end(), [](const BivPoly& a, const BivPoly& b) {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return to_string(a) < to_string(b);
    });
    FactorBase fb;
    fb.base = work;
    for (auto& p : polys) {
        std::vector<int> ex;
        for (auto& b : work) {
            int e = 0;
            BivPoly cur = p, q;
            while (!cur.is_zero() && divides(b, cur, &q)) {
                cur = q;
                ++e;
            }
            ex.push_back(e);
        }
        fb.exponents.push_back(ex);
    }
    return fb;
}

}  // namespace valmult
