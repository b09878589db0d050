#pragma once

#include "valmult/upoly.hpp"

#include <memory>
#include <string>
#include <vector>

namespace valmult {

// Q[t]/(modulus) with modulus monic irreducible of degree >= 2.
// A null FieldPtr stands for Q itself.
struct NumberField {
    UPoly modulus;
    explicit NumberField(UPoly m);
    int deg() const { return modulus.deg(); }
};
using FieldPtr = std::shared_ptr<const NumberField>;

inline int field_degree(const FieldPtr& F) { return F ? F->deg() : 1; }
std::string field_name(const FieldPtr& F);  // "Q" or "Q[t]/(...)"
FieldPtr make_field(const UPoly& monic_irreducible);

// Element of a number field, coefficients in the power basis of the generator.
class Alg {
public:
    FieldPtr F;
    std::vector<Rat> c;  // trimmed, size < deg

    Alg() = default;
    Alg(const Rat& r);
    Alg(long n) : Alg(Rat(n)) {}
    Alg(FieldPtr f, std::vector<Rat> coeffs);
    Alg(FieldPtr f, const UPoly& p);
    static Alg gen(const FieldPtr& f);

    bool is_zero() const { return c.empty(); }
    bool is_rational() const { return c.size() <= 1; }
    Rat rational() const;  // checked
    UPoly poly() const { return UPoly(c); }

    Alg operator-() const;
    Alg& operator+=(const Alg& o);
    Alg& operator-=(const Alg& o);
    Alg& operator*=(const Alg& o);
    Alg inv() const;
    Rat norm() const;
    Rat trace() const;

    friend bool operator==(const Alg& a, const Alg& b) { return a.c == b.c; }
    friend bool operator!=(const Alg& a, const Alg& b) { return !(a == b); }
};

Alg operator+(Alg a, const Alg& b);
Alg operator-(Alg a, const Alg& b);
Alg operator*(Alg a, const Alg& b);
Alg operator/(const Alg& a, const Alg& b);
Alg pow(Alg a, long e);
std::string to_string(const Alg& a);

// Field homomorphism K -> L sending the generator of K to `image`.
struct Embedding {
    FieldPtr from, to;
    Alg image;  // of the generator of `from`; unused when from is Q
    Alg operator()(const Alg& a) const;
    static Embedding identity(const FieldPtr& F);
};
Embedding compose(const Embedding& first, const Embedding& second);

// Dense univariate polynomial over a number field.
struct KPoly {
    FieldPtr F;
    std::vector<Alg> c;

    KPoly() = default;
    KPoly(FieldPtr f, std::vector<Alg> coeffs);
    static KPoly from_upoly(const FieldPtr& f, const UPoly& p);
    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Alg& lc() const { return c.back(); }
    Alg coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[i] : Alg(); }
    void trim();
    KPoly monic() const;
    KPoly derivative() const;
    Alg eval(const Alg& x) const;
    KPoly compose(const KPoly& q) const;
    KPoly map(const Embedding& e) const;
    bool operator==(const KPoly& o) const { return c == o.c; }
};

KPoly operator+(const KPoly& a, const KPoly& b);
KPoly operator-(const KPoly& a, const KPoly& b);
KPoly operator*(const KPoly& a, const KPoly& b);
std::pair<KPoly, KPoly> divmod(const KPoly& a, const KPoly& b);
KPoly gcd(const KPoly& a, const KPoly& b);  // monic
KPoly squarefree_part(const KPoly& a);
UPoly norm_poly(const KPoly& a);  // N_{K/Q} of a monic polynomial, in Q[z]

// One irreducible factor over K together with a field containing a root.
struct KFactor {
    KPoly factor;        // monic irreducible over K
    int multiplicity = 1;
    FieldPtr L;          // K(root); equals K for linear factors
    Embedding embed;     // K -> L
    Alg root;            // in L
};

// Irreducible factorization over K (Trager's norm method).
std::vector<KFactor> factor_over(const KPoly& a);

}  // namespace valmult
