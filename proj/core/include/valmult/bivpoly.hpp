#pragma once

#include "valmult/upoly.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace valmult {

// Exponent pair (i, j) for x^i y^j.
using Mono = std::pair<int, int>;

class BivPoly {
public:
    std::map<Mono, Rat> terms;  // no zero coefficients

    BivPoly() = default;
    BivPoly(const Rat& c);
    BivPoly(long c) : BivPoly(Rat(c)) {}
    static BivPoly monomial(const Rat& c, int i, int j);
    static BivPoly x() { return monomial(1, 1, 0); }
    static BivPoly y() { return monomial(1, 0, 1); }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const;
    Rat coeff(int i, int j) const;
    Rat constant_term() const { return coeff(0, 0); }
    int total_degree() const;  // -1 for zero
    int order() const;         // minimal total degree; throws on zero
    int deg_x() const;
    int deg_y() const;
    BivPoly lowest_form() const;  // homogeneous part of degree order()

    void add_term(int i, int j, const Rat& c);
    BivPoly operator-() const;
    BivPoly& operator+=(const BivPoly& o);
    BivPoly& operator-=(const BivPoly& o);
    BivPoly& operator*=(const Rat& c);

    // As a polynomial in y with coefficients in Q[x]: result[j] = coefficient of y^j.
    std::vector<UPoly> y_coeffs() const;
    static BivPoly from_y_coeffs(const std::vector<UPoly>& cs);
    std::vector<UPoly> x_coeffs() const;

    BivPoly shear_x(const Rat& lambda) const;  // p(x + lambda*y, y)
    BivPoly swap_xy() const;
    BivPoly truncate(int max_total_degree) const;

    friend bool operator==(const BivPoly& a, const BivPoly& b) { return a.terms == b.terms; }
    friend bool operator!=(const BivPoly& a, const BivPoly& b) { return !(a == b); }
    friend bool operator<(const BivPoly& a, const BivPoly& b) { return a.terms < b.terms; }
};

BivPoly operator+(BivPoly a, const BivPoly& b);
BivPoly operator-(BivPoly a, const BivPoly& b);
BivPoly operator*(const BivPoly& a, const BivPoly& b);
BivPoly operator*(BivPoly a, const Rat& c);
BivPoly pow(const BivPoly& a, int e);

// Exact division; throws ConsistencyError when not exact.
BivPoly exact_div(const BivPoly& a, const BivPoly& b);
bool divides(const BivPoly& d, const BivPoly& a, BivPoly* quotient = nullptr);
// gcd normalized to have leading coefficient 1 in (deg_y, deg_x) order.
BivPoly gcd(const BivPoly& a, const BivPoly& b);
BivPoly normalize(const BivPoly& a);
BivPoly squarefree_part(const BivPoly& a);

// Parse errors carry the byte offset of the offending token.
struct ParseError : DomainError {
    size_t offset;
    ParseError(const std::string& msg, size_t off);
};

BivPoly parse_poly(const std::string& text);
std::string to_string(const BivPoly& p);  // canonical serialization
const char* poly_grammar();

int mult_at_origin(const BivPoly& p);

// Sylvester resultant eliminating y, rows of p first.
UPoly resultant_elim_y(const BivPoly& p, const BivPoly& q);

struct IntersectionResult {
    Value value;
    int shear = 0;  // lambda used in x <- x + lambda*y
};
IntersectionResult intersection_multiplicity_ex(const BivPoly& p, const BivPoly& q);
Value intersection_multiplicity(const BivPoly& p, const BivPoly& q);

// Coprime squarefree base: every input factors as unit * prod base_i^{e_i}.
struct FactorBase {
    std::vector<BivPoly> base;
    std::vector<std::vector<int>> exponents;  // exponents[k][i] for input k
};
FactorBase coprime_base(const std::vector<BivPoly>& polys);

}  // namespace valmult
