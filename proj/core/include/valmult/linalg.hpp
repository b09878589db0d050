#pragma once

#include "valmult/rat.hpp"

#include <vector>

namespace valmult {

using RatVec = std::vector<Rat>;

// Row space over Q kept in reduced echelon form.
struct Echelon {
    std::vector<RatVec> rows;
    std::vector<size_t> piv;

    void reduce(RatVec& v) const;
    bool insert(RatVec v);  // false when v is already in the span
    // Basis of the solutions of rows * x = 0 in dimension n, one per free column.
    std::vector<RatVec> kernel(size_t n) const;
};

}  // namespace valmult
