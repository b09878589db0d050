#include "valmult/linalg.hpp"

namespace valmult {

void Echelon::reduce(RatVec& v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
        if (v[piv[r]] == 0) continue;
        Rat f = v[piv[r]];
        for (size_t k = 0; k < v.size(); ++k)
            if (rows[r][k] != 0) v[k] -= f * rows[r][k];
    }
}

bool Echelon::insert(RatVec v) {
    reduce(v);
    size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) return false;
    Rat inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    for (auto& row : rows) {
        if (row[p] == 0) continue;
        Rat f = row[p];
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0) row[k] -= f * v[k];
    }
    rows.push_back(std::move(v));
    piv.push_back(p);
    return true;
}

std::vector<RatVec> Echelon::kernel(size_t n) const {
    std::vector<bool> is_piv(n, false);
    for (size_t p : piv) is_piv[p] = true;
    std::vector<RatVec> out;
    for (size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        RatVec v(n);
        v[f] = 1;
        for (size_t r = 0; r < rows.size(); ++r) v[piv[r]] = -rows[r][f];
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace valmult
