#include "nekhoro/lattice.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace nekhoro {

i64 l1_norm(const IntVec& k) {
    i64 s = 0;
    for (i64 c : k) s = checked_add(s, checked_abs(c));
    return s;
}

bool is_zero(const IntVec& k) {
    for (i64 c : k)
        if (c != 0) return false;
    return true;
}

IntVec canonical_sign(const IntVec& k) {
    for (i64 c : k) {
        if (c > 0) return k;
        if (c < 0) {
            IntVec r(k.size());
            for (size_t i = 0; i < k.size(); ++i) r[i] = checked_neg(k[i]);
            return r;
        }
    }
    return k;
}

ResonanceModule make_module(IntMat basis, i64 order) {
    if (basis.rows < 1 || basis.cols < basis.rows)
        throw std::invalid_argument("module basis must be r x n with 1 <= r <= n");
    if (order < 1) throw std::invalid_argument("module order K must be >= 1");
    if (int_rank(basis) != basis.rows)
        throw std::invalid_argument("module basis rows are linearly dependent");
    for (int i = 0; i < basis.rows; ++i) {
        i64 s = 0;
        for (int j = 0; j < basis.cols; ++j) s = checked_add(s, checked_abs(basis.at(i, j)));
        if (s > order) throw std::invalid_argument("basis row exceeds the declared l1 bound K");
    }
    return ResonanceModule{basis.rows, std::move(basis), order};
}

BezoutResult extended_gcd_bounded(i64 x, i64 y) {
    if (x == 0 && y == 0) throw std::invalid_argument("extended_gcd_bounded: both arguments zero");
    if (y == 0) return {checked_abs(x), x > 0 ? 1 : -1, 0};
    if (x == 0) return {checked_abs(y), 0, y > 0 ? 1 : -1};

    // Classic iterative extended Euclid on |x|, |y|.
    i64 a = checked_abs(x), b = checked_abs(y);
    i64 u0 = 1, v0 = 0, u1 = 0, v1 = 1;
    while (b != 0) {
        const i64 q = a / b;
        i64 t = a - q * b;
        a = b;
        b = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
        t = v0 - q * v1;
        v0 = v1;
        v1 = t;
    }
    const i64 d = a;
    i64 u = x > 0 ? u0 : -u0;
    i64 v = y > 0 ? v0 : -v0;

    // The general solution is (u + t*y/d, v - t*x/d); shift so both bounds hold.
    const i64 ystep = y / d, xstep = x / d;
    auto ok = [&](i64 uu, i64 vv) {
        return checked_abs(uu) <= checked_abs(ystep) && checked_abs(vv) <= checked_abs(xstep);
    };
    for (i64 t = -2; t <= 2; ++t) {
        const i64 uu = checked_add(u, checked_mul(t, ystep));
        const i64 vv = checked_sub(v, checked_mul(t, xstep));
        if (checked_add(checked_mul(uu, x), checked_mul(vv, y)) != d) continue;
        if (ok(uu, vv)) return {d, uu, vv};
    }
    throw std::logic_error("extended_gcd_bounded: no bounded coefficient pair found");
}

bool is_primitive(const IntVec& k) {
    if (is_zero(k)) throw std::invalid_argument("is_primitive: zero vector");
    i64 g = 0;
    for (i64 c : k) g = gcd_i64(g, c);
    return g == 1;
}

namespace {

// Inductive completion: returns an n x n unimodular matrix with first row k,
// all row l1 sums <= K.  Assumes k primitive and |k|_1 <= K.
IntMat complete_rows(const IntVec& k, i64 K) {
    const int n = static_cast<int>(k.size());
    IntMat A(n, n);
    if (n == 1) {
        A.at(0, 0) = k[0];  // +-1 by primitivity
        return A;
    }

    IntVec head(k.begin(), k.end() - 1);
    if (is_zero(head)) {
        // Mirror split: complete the tail (k_2..k_n) and pad with e_1.
        IntVec tail(k.begin() + 1, k.end());
        IntMat T = complete_rows(tail, K);
        for (int j = 1; j < n; ++j) A.at(0, j) = k[j];
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n; ++j) A.at(i, j) = T.at(i, j - 1);
        A.at(n - 1, 0) = 1;
        return A;
    }

    i64 d = 0;
    for (i64 c : head) d = gcd_i64(d, c);
    IntVec reduced(head.size());
    for (size_t i = 0; i < head.size(); ++i) reduced[i] = head[i] / d;

    const IntMat H = complete_rows(reduced, K);

    i64 u = 1, v = 0;
    if (k[n - 1] != 0) {
        const BezoutResult bz = extended_gcd_bounded(d, k[n - 1]);
        u = bz.u;
        v = bz.v;  // u*d + v*k_n = 1, |u| <= |k_n|, |v| <= d
    }

    for (int j = 0; j < n; ++j) A.at(0, j) = k[j];
    for (int i = 1; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) A.at(i, j) = H.at(i, j);
    // Last row carries the Bezout pair; the sign on the first block makes the
    // determinant expansion along the last column collapse to u*d + v*k_n.
    for (int j = 0; j < n - 1; ++j) A.at(n - 1, j) = checked_mul(checked_neg(v), reduced[j]);
    A.at(n - 1, n - 1) = u;
    return A;
}

}  // namespace

UnimodularCompletion unimodular_completion(const IntVec& k, i64 K) {
    if (k.empty()) throw std::invalid_argument("unimodular_completion: empty vector");
    if (is_zero(k)) throw std::invalid_argument("unimodular_completion: zero vector");
    if (!is_primitive(k)) throw std::invalid_argument("unimodular_completion: k is not primitive");
    if (K < 1 || l1_norm(k) > K)
        throw std::domain_error("unimodular_completion: |k|_1 exceeds K");

    UnimodularCompletion out;
    out.matrix = complete_rows(k, K);

    const i64 det = int_det(out.matrix);
    if (det != 1 && det != -1)
        throw std::logic_error("unimodular_completion: determinant is not +-1");

    out.inverse = int_adjugate(out.matrix);
    if (det == -1)
        for (i64& c : out.inverse.a) c = checked_neg(c);

    out.row_norm = max_row_l1(out.matrix);
    out.inverse_norm = max_row_l1(out.inverse);
    if (out.row_norm > K) throw std::logic_error("unimodular_completion: row norm exceeds K");
    return out;
}

std::pair<i64, i64> module_constants(const IntVec& k, i64 K) {
    const UnimodularCompletion c = unimodular_completion(k, K);
    return {c.inverse_norm, c.row_norm};
}

namespace {

struct SnfWork {
    IntMat W;  // r x n, reduced in place
    IntMat B;  // r x r, accumulates inverse row ops
    IntMat A;  // n x n, accumulates inverse column ops
};

void swap_rows(IntMat& m, int i, int j) {
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

void swap_cols(IntMat& m, int i, int j) {
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

// W <- W with row i -= q * row s;  B <- B with col s += q * col i.
void row_op(SnfWork& w, int i, int s, i64 q) {
    for (int c = 0; c < w.W.cols; ++c)
        w.W.at(i, c) = checked_sub(w.W.at(i, c), checked_mul(q, w.W.at(s, c)));
    for (int r = 0; r < w.B.rows; ++r)
        w.B.at(r, s) = checked_add(w.B.at(r, s), checked_mul(q, w.B.at(r, i)));
}

// W <- W with col j -= q * col s;  A <- A with row s += q * row j.
void col_op(SnfWork& w, int j, int s, i64 q) {
    for (int r = 0; r < w.W.rows; ++r)
        w.W.at(r, j) = checked_sub(w.W.at(r, j), checked_mul(q, w.W.at(r, s)));
    for (int c = 0; c < w.A.cols; ++c)
        w.A.at(s, c) = checked_add(w.A.at(s, c), checked_mul(q, w.A.at(j, c)));
}

bool find_pivot(const IntMat& W, int s, int& pi, int& pj) {
    i64 best = 0;
    pi = pj = -1;
    for (int i = s; i < W.rows; ++i)
        for (int j = s; j < W.cols; ++j) {
            const i64 v = checked_abs(W.at(i, j));
            if (v != 0 && (pi < 0 || v < best)) {
                best = v;
                pi = i;
                pj = j;
            }
        }
    return pi >= 0;
}

// Exact product check in arbitrary precision: B * diag(d) * A == L.
bool reconstructs(const IntMat& B, const std::vector<i64>& d, const IntMat& A, const IntMat& L) {
    const int r = B.rows, n = A.cols;
    mpz_t acc, term;
    mpz_init(acc);
    mpz_init(term);
    bool ok = true;
    for (int i = 0; ok && i < r; ++i)
        for (int j = 0; ok && j < n; ++j) {
            mpz_set_si(acc, 0);
            for (int t = 0; t < r; ++t) {
                mpz_set_si(term, B.at(i, t));
                mpz_mul_si(term, term, d[t]);
                mpz_mul_si(term, term, A.at(t, j));
                mpz_add(acc, acc, term);
            }
            ok = mpz_cmp_si(acc, L.at(i, j)) == 0;
        }
    mpz_clear(acc);
    mpz_clear(term);
    return ok;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMat& L) {
    const int r = L.rows, n = L.cols;
    if (r < 1 || n < 1) throw std::invalid_argument("smith_normal_form: empty matrix");
    if (r > n) throw std::invalid_argument("smith_normal_form: more rows than columns");

    SnfWork w{L, IntMat::identity(r), IntMat::identity(n)};

    for (int s = 0; s < r; ++s) {
        int pi, pj;
        if (!find_pivot(w.W, s, pi, pj))
            throw std::invalid_argument("smith_normal_form: rank-deficient input");
        if (pi != s) {
            swap_rows(w.W, s, pi);
            swap_cols(w.B, s, pi);
        }
        if (pj != s) {
            swap_cols(w.W, s, pj);
            swap_rows(w.A, s, pj);
        }

        for (;;) {
            // Clear below and to the right of the pivot; a nonzero remainder
            // is swapped into the pivot slot (it is strictly smaller, so this
            // terminates) and elimination restarts.
            bool dirty = false;
            for (int i = s + 1; i < r && !dirty; ++i) {
                if (w.W.at(i, s) == 0) continue;
                const i64 q = w.W.at(i, s) / w.W.at(s, s);
                if (q != 0) row_op(w, i, s, q);
                if (w.W.at(i, s) != 0) {
                    swap_rows(w.W, s, i);
                    swap_cols(w.B, s, i);
                    dirty = true;
                }
            }
            if (dirty) continue;
            for (int j = s + 1; j < n && !dirty; ++j) {
                if (w.W.at(s, j) == 0) continue;
                const i64 q = w.W.at(s, j) / w.W.at(s, s);
                if (q != 0) col_op(w, j, s, q);
                if (w.W.at(s, j) != 0) {
                    swap_cols(w.W, s, j);
                    swap_rows(w.A, s, j);
                    dirty = true;
                }
            }
            if (dirty) continue;

            // Divisibility fix-up for the trailing block.
            int bi = -1, bj = -1;
            for (int i = s + 1; i < r && bi < 0; ++i)
                for (int j = s + 1; j < n; ++j)
                    if (w.W.at(i, j) % w.W.at(s, s) != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi < 0) break;
            row_op(w, s, bi, -1);  // row s += row bi, then restart elimination
        }

        if (w.W.at(s, s) < 0) {
            for (int c = 0; c < n; ++c) w.W.at(s, c) = checked_neg(w.W.at(s, c));
            for (int t = 0; t < r; ++t) w.B.at(t, s) = checked_neg(w.B.at(t, s));
        }
    }

    SmithDecomposition out;
    out.B = std::move(w.B);
    out.A = std::move(w.A);
    out.invariant_factors.resize(r);
    for (int s = 0; s < r; ++s) out.invariant_factors[s] = w.W.at(s, s);

    for (int s = 0; s + 1 < r; ++s)
        if (out.invariant_factors[s + 1] % out.invariant_factors[s] != 0)
            throw std::logic_error("smith_normal_form: divisibility chain broken");

    const i64 detB = int_det(out.B);
    const i64 detA = int_det(out.A);
    if ((detB != 1 && detB != -1) || (detA != 1 && detA != -1))
        throw std::logic_error("smith_normal_form: transform not unimodular");
    if (!reconstructs(out.B, out.invariant_factors, out.A, L))
        throw std::logic_error("smith_normal_form: reconstruction mismatch");
    return out;
}

double module_volume(const ResonanceModule& m) {
    const int r = m.basis.rows, n = m.basis.cols;
    IntMat gram(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            i64 s = 0;
            for (int c = 0; c < n; ++c)
                s = checked_add(s, checked_mul(m.basis.at(i, c), m.basis.at(j, c)));
            gram.at(i, j) = s;
        }
    const i64 det = int_det(gram);
    if (det <= 0) throw std::invalid_argument("module_volume: rank-deficient basis");
    return std::sqrt(static_cast<double>(det));
}

Fraction rational_in_interval(double x, double l) {
    if (!(l > 0)) throw std::invalid_argument("rational_in_interval: l must be positive");
    // The interval [x - l/2, x + l/2] is understood clipped to [-1,1]; the
    // midpoint itself must lie inside.
    if (!(l <= 2) || x < -1.0 || x > 1.0)
        throw std::domain_error("rational_in_interval: interval midpoint outside [-1,1]");

    const double qr = 1.0 / l;
    i64 q = static_cast<i64>(std::ceil(qr));
    if (q < 1) q = 1;

    const double qx = static_cast<double>(q) * x;
    const double fl = std::floor(qx);
    i64 p = static_cast<i64>(fl);
    if (qx - fl > 0.5) p += 1;  // ties take the floor branch

    const i64 g = gcd_i64(p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    return {p, q};
}

}  // namespace nekhoro
