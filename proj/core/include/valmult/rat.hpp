#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace valmult {

// GMP keeps mpq_class in lowest terms with a positive denominator as long as
// every value is built through canonicalizing paths, which the helpers below do.
using Int = mpz_class;
using Rat = mpq_class;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an internal cross-check fails; never caught inside the library.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

inline void check(bool ok, const char* what) {
    if (!ok) throw ConsistencyError(what);
}

Rat parse_rat(std::string_view s);
std::string to_string(const Rat& r);
std::string to_string(const Int& z);

Int floor_rat(const Rat& r);
Int ceil_rat(const Rat& r);
inline bool is_integer(const Rat& r) { return r.get_den() == 1; }
long to_long(const Int& z);

inline Rat rat(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Int lcm(const Int& a, const Int& b);
Int gcd(const Int& a, const Int& b);

// Rational or +infinity (curve valuations on their own curve, shared branches).
struct Value {
    Rat v;
    bool inf = false;
    Value() = default;
    Value(const Rat& r) : v(r) {}
    static Value infinity() {
        Value x;
        x.inf = true;
        return x;
    }
    bool finite() const { return !inf; }
    friend bool operator==(const Value& a, const Value& b) { return a.inf == b.inf && (a.inf || a.v == b.v); }
    friend bool operator<(const Value& a, const Value& b) {
        if (a.inf) return false;
        if (b.inf) return true;
        return a.v < b.v;
    }
    friend bool operator<=(const Value& a, const Value& b) { return !(b < a); }
    friend Value operator+(const Value& a, const Value& b) {
        if (a.inf || b.inf) return infinity();
        return Value(a.v + b.v);
    }
};
std::string to_string(const Value& v);

}  // namespace valmult
