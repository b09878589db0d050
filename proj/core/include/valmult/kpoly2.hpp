#pragma once

#include "valmult/bivpoly.hpp"
#include "valmult/numfield.hpp"

#include <map>

namespace valmult {

// Sparse bivariate polynomial in local chart coordinates (u, v) over a number field.
class KPoly2 {
public:
    FieldPtr F;
    std::map<Mono, Alg> terms;

    KPoly2() = default;
    explicit KPoly2(FieldPtr f) : F(std::move(f)) {}
    static KPoly2 from_biv(const FieldPtr& f, const BivPoly& p);
    static KPoly2 monomial(const FieldPtr& f, const Alg& c, int i, int j);

    bool is_zero() const { return terms.empty(); }
    int order() const;  // -1 for zero
    int total_degree() const;
    int ord_u() const;  // largest k with u^k | p
    int ord_v() const;
    Alg coeff(int i, int j) const;
    Alg constant_term() const { return coeff(0, 0); }
    KPoly2 lowest_form() const;
    KPoly2 truncate(int d) const;
    KPoly2 div_u(int k) const;
    KPoly2 div_v(int k) const;

    void add_term(int i, int j, const Alg& c);
    KPoly2& operator+=(const KPoly2& o);
    KPoly2& operator-=(const KPoly2& o);
    KPoly2 operator-() const;
    KPoly2 scaled(const Alg& c) const;

    KPoly2 map(const Embedding& e) const;
    KPoly2 chart1(const Alg& c) const;  // p(u, u*(v + c))
    KPoly2 chart2() const;              // p(u*v, v)

    // Restriction to u = 1 of a form, as a polynomial in v (for directions of the tangent cone).
    KPoly dehomogenize() const;
    bool operator==(const KPoly2& o) const { return terms == o.terms; }
};

KPoly2 operator+(KPoly2 a, const KPoly2& b);
KPoly2 operator-(KPoly2 a, const KPoly2& b);
KPoly2 operator*(const KPoly2& a, const KPoly2& b);
KPoly2 mul_trunc(const KPoly2& a, const KPoly2& b, int d);

// p(X, Y) truncated at total degree d, for X, Y of positive order.
KPoly2 substitute_trunc(const BivPoly& p, const KPoly2& X, const KPoly2& Y, int d);

std::string to_string(const KPoly2& p);

}  // namespace valmult
