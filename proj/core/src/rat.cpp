#include "valmult/rat.hpp"

#include <climits>

namespace valmult {

Rat parse_rat(std::string_view s) {
    std::string t(s);
    auto bad = [&] { return DomainError("malformed rational literal '" + t + "'"); };
    if (t.empty()) throw bad();
    size_t slash = t.find('/');
    auto digits_ok = [](const std::string& u, bool allow_sign) {
        size_t i = 0;
        if (allow_sign && !u.empty() && (u[0] == '-' || u[0] == '+')) i = 1;
        if (i >= u.size()) return false;
        for (; i < u.size(); ++i)
            if (u[i] < '0' || u[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? t : t.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    if (num[0] == '+') num = num.substr(1);
    Int n(num), d(den);
    if (d == 0) throw DomainError("zero denominator in '" + t + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Value& v) { return v.inf ? "inf" : to_string(v.v); }

std::string to_string(const Int& z) { return z.get_str(); }

std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Int floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Int ceil_rat(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

long to_long(const Int& z) {
    if (!z.fits_slong_p()) throw ResourceError("integer too large for machine word: " + z.get_str());
    return z.get_si();
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace valmult
