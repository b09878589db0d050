#pragma once

#include "valmult/rat.hpp"

#include <utility>
#include <vector>

namespace valmult {

// Dense univariate polynomial over Q, coefficients from degree 0 upward.
class UPoly {
public:
    std::vector<Rat> c;

    UPoly() = default;
    UPoly(const Rat& constant) {
        if (constant != 0) c.push_back(constant);
    }
    explicit UPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static UPoly monomial(const Rat& a, int k);
    static UPoly var() { return monomial(1, 1); }

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rat coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[i] : Rat(0); }
    const Rat& lc() const { return c.back(); }
    int ord() const;

    void trim();
    UPoly monic() const;
    UPoly derivative() const;
    Rat eval(const Rat& t) const;
    UPoly compose(const UPoly& q) const;
    UPoly shift(const Rat& a) const;  // p(t + a)

    UPoly operator-() const;
    UPoly& operator+=(const UPoly& o);
    UPoly& operator-=(const UPoly& o);
    UPoly& operator*=(const Rat& a);

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }
};

UPoly operator+(UPoly a, const UPoly& b);
UPoly operator-(UPoly a, const UPoly& b);
UPoly operator*(const UPoly& a, const UPoly& b);
UPoly operator*(UPoly a, const Rat& s);

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly operator/(const UPoly& a, const UPoly& b);  // exact quotient, checked
UPoly operator%(const UPoly& a, const UPoly& b);

UPoly gcd(const UPoly& a, const UPoly& b);  // monic, gcd(0,0) = 0
// s*a + t*b = g with g = gcd(a, b) monic
void ext_gcd(const UPoly& a, const UPoly& b, UPoly& g, UPoly& s, UPoly& t);
UPoly squarefree_part(const UPoly& a);
std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& a);
Rat resultant(const UPoly& a, const UPoly& b);

// Primitive integer multiple with positive leading coefficient.
std::vector<Int> primitive_integer(const UPoly& a);
UPoly from_integer(const std::vector<Int>& v);

// Monic irreducible factors over Q with multiplicities (constant factor dropped).
std::vector<std::pair<UPoly, int>> factor(const UPoly& a);
bool is_irreducible(const UPoly& a);

// Interpolation through (x_i, y_i) with distinct x_i.
UPoly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys);

std::string to_string(const UPoly& p, const char* var = "t");

}  // namespace valmult
