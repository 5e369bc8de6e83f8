#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace nekhoro {

using i64 = std::int64_t;
using u64 = std::uint64_t;

// 64-bit integer arithmetic that errors on overflow instead of wrapping.
// All exact lattice computations go through these.

inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i64 add overflow");
    return r;
}

inline i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("i64 sub overflow");
    return r;
}

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i64 mul overflow");
    return r;
}

inline i64 checked_neg(i64 a) {
    if (a == INT64_MIN) throw std::overflow_error("i64 negate overflow");
    return -a;
}

inline i64 checked_abs(i64 a) { return a < 0 ? checked_neg(a) : a; }

// gcd(0, 0) = 0; result is always nonnegative.
inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(checked_abs(a), checked_abs(b)); }

}  // namespace nekhoro
