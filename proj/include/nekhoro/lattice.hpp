#pragma once

#include <utility>
#include <vector>

#include "nekhoro/checked_int.hpp"
#include "nekhoro/intmat.hpp"

namespace nekhoro {

// Integer vectors k in Z^n; |k| always means the l1 norm here.
using IntVec = std::vector<i64>;

i64 l1_norm(const IntVec& k);
bool is_zero(const IntVec& k);

// Canonical representative of {k, -k}: first nonzero component positive.
IntVec canonical_sign(const IntVec& k);

// A rank-r submodule of Z^n, rows of `basis` are the generators.  `order`
// is the caller-supplied l1 bound K on the generators; only |row|_1 <= K
// is verified (K-minimality is not checked).
struct ResonanceModule {
    int rank = 0;
    IntMat basis;  // rank x n
    i64 order = 1;
};

ResonanceModule make_module(IntMat basis, i64 order);

// L = B * diag(invariant_factors) * A with |det A| = |det B| = 1 and
// d_1 | d_2 | ... | d_r.
struct SmithDecomposition {
    IntMat B;                          // r x r, unimodular
    std::vector<i64> invariant_factors;  // length r, positive
    IntMat A;                          // n x n, unimodular
};

// Square completion of a primitive vector: first row equals k, |det| = 1,
// every row l1 sum <= K.
struct UnimodularCompletion {
    IntMat matrix;    // n x n
    IntMat inverse;   // exact integer inverse (det = +-1)
    i64 row_norm = 0;      // |A|  = max row l1 sum
    i64 inverse_norm = 0;  // |A^-1|
};

// Bezout identity u*x + v*y = d = gcd(x,y) with |u| <= |y|/d, |v| <= |x|/d
// (bound on a coefficient is waived when the opposite argument is zero, in
// which case that coefficient is +-1).  Throws std::invalid_argument on (0,0).
struct BezoutResult {
    i64 d, u, v;
};
BezoutResult extended_gcd_bounded(i64 x, i64 y);

// True iff the components of k are relatively prime.  Throws on k = 0.
bool is_primitive(const IntVec& k);

UnimodularCompletion unimodular_completion(const IntVec& k, i64 K);

// (c_upper, c_prime_upper) = (|A^-1|, |A|) for the completion of k.
std::pair<i64, i64> module_constants(const IntVec& k, i64 K);

SmithDecomposition smith_normal_form(const IntMat& L);

// sqrt(det(M M^t)) for the basis matrix M (rows are generators).
double module_volume(const ResonanceModule& m);

// A reduced fraction p/q inside [x - l/2, x + l/2] with |p| + q < 6/l,
// built by the constructive smallest-denominator argument.
struct Fraction {
    i64 p;
    i64 q;  // > 0
};
Fraction rational_in_interval(double x, double l);

}  // namespace nekhoro
