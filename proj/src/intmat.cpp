#include "nekhoro/intmat.hpp"

#include <stdexcept>
#include <utility>

namespace nekhoro {

IntMat int_mul(const IntMat& x, const IntMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("int_mul: shape mismatch");
    IntMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const i64 v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = checked_add(r.at(i, j), checked_mul(v, y.at(k, j)));
        }
    return r;
}

i64 int_det(const IntMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("int_det: not square");
    const int n = m.rows;
    if (n == 0) return 1;
    IntMat w = m;
    i64 sign = 1;
    i64 prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                const i64 num = checked_sub(checked_mul(w.at(i, j), w.at(k, k)),
                                            checked_mul(w.at(i, k), w.at(k, j)));
                // Bareiss: division by the previous pivot is exact.
                w.at(i, j) = num / prev;
            }
            w.at(i, k) = 0;
        }
        prev = w.at(k, k);
    }
    return checked_mul(sign, w.at(n - 1, n - 1));
}

namespace {

IntMat drop_row_col(const IntMat& m, int row, int col) {
    IntMat r(m.rows - 1, m.cols - 1);
    for (int i = 0, ri = 0; i < m.rows; ++i) {
        if (i == row) continue;
        for (int j = 0, rj = 0; j < m.cols; ++j) {
            if (j == col) continue;
            r.at(ri, rj++) = m.at(i, j);
        }
        ++ri;
    }
    return r;
}

}  // namespace

IntMat int_adjugate(const IntMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("int_adjugate: not square");
    const int n = m.rows;
    IntMat adj(n, n);
    if (n == 1) {
        adj.at(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const i64 minor = int_det(drop_row_col(m, j, i));
            adj.at(i, j) = ((i + j) % 2 == 0) ? minor : checked_neg(minor);
        }
    return adj;
}

i64 max_row_l1(const IntMat& m) {
    i64 best = 0;
    for (int i = 0; i < m.rows; ++i) {
        i64 s = 0;
        for (int j = 0; j < m.cols; ++j) s = checked_add(s, checked_abs(m.at(i, j)));
        if (s > best) best = s;
    }
    return best;
}

int int_rank(IntMat w) {
    const int nr = w.rows, nc = w.cols;
    int rank = 0;
    i64 prev = 1;
    for (int col = 0; col < nc && rank < nr; ++col) {
        int p = -1;
        for (int i = rank; i < nr; ++i)
            if (w.at(i, col) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != rank)
            for (int j = 0; j < nc; ++j) std::swap(w.at(rank, j), w.at(p, j));
        for (int i = rank + 1; i < nr; ++i) {
            for (int j = col + 1; j < nc; ++j) {
                const i64 num = checked_sub(checked_mul(w.at(i, j), w.at(rank, col)),
                                            checked_mul(w.at(i, col), w.at(rank, j)));
                w.at(i, j) = num / prev;
            }
            w.at(i, col) = 0;
        }
        prev = w.at(rank, col);
        ++rank;
    }
    return rank;
}

}  // namespace nekhoro
