#pragma once

#include <vector>

#include "nekhoro/checked_int.hpp"

namespace nekhoro {

// Dense integer matrix, row-major, with exact (overflow-checked) arithmetic.
struct IntMat {
    int rows = 0;
    int cols = 0;
    std::vector<i64> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    i64& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    i64 at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const IntMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

IntMat int_mul(const IntMat& x, const IntMat& y);

// Exact determinant by fraction-free (Bareiss) elimination; throws on overflow.
i64 int_det(const IntMat& m);

// Adjugate via signed minors.  For |det| = 1 this is +-inverse.
IntMat int_adjugate(const IntMat& m);

// Matrix norm induced by the sup norm on vectors: max row l1 sum.
i64 max_row_l1(const IntMat& m);

// Rank over the rationals (fraction-free elimination).
int int_rank(IntMat m);

}  // namespace nekhoro
