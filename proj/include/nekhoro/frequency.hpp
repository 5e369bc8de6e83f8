#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nekhoro/lattice.hpp"
#include "nekhoro/linalg.hpp"
#include "nekhoro/model.hpp"

namespace nekhoro {

// A frequency vector together with the index attaining its sup norm.
struct FrequencyPoint {
    Vec omega;
    int sup_index = 0;
};
FrequencyPoint make_frequency_point(Vec omega);

// Energy / scaled-frequency map (h(I), lambda * grad h(I)).
std::pair<double, Vec> psi_h(const IntegrableModel& model, const Vec& I, double lambda);

// Smallest singular value of the (n+1)x(n+1) Jacobian of psi_h at (I, lambda);
// nullopt when it falls below tol (the map degenerates).
std::optional<double> psi_h_nondegenerate(const IntegrableModel& model, const Vec& I,
                                          double lambda, double tol);

// Minimizer of |k . omega| over primitive k with 0 < |k|_1 <= K, canonical
// sign, lexicographically earliest on ties.  Throws budget_exceeded when the
// raw enumeration would exceed `budget` candidates.
struct SmallDivisor {
    IntVec k;
    double value = 0.0;
};
SmallDivisor small_divisor(const Vec& omega, i64 K, i64 budget = 20'000'000);

// The small-divisor minimizer iff its value is <= tol * |omega|_inf.
std::optional<IntVec> in_RK(const Vec& omega, i64 K, double tol, i64 budget = 20'000'000);

// A detected simple-resonance crossing along a frequency path.
struct ResonanceEvent {
    double time = 0.0;
    IntVec k;             // primitive, canonical sign, |k|_1 < K
    double residual = 0.0;  // |k . omega(time)|
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool index_switch = false;  // arose from a sup-index change
};

struct FreqSample {
    double t = 0.0;
    Vec omega;
};

struct DetectConfig {
    int window = 50;          // samples per sliding window
    double l = 0.05;          // range threshold fed to the rational lemma
    double bisect_tol = 1e-10;       // on t
    double residual_rel_tol = 1e-8;  // relative to |omega|_inf
};

// Scans the normalized component ratios omega_i / |omega|_inf for rational
// levels p/q (|p| + q < 6/l) crossed inside sliding windows, plus sup-index
// switches (ratio +-1), and refines each crossing time by bisection on the
// piecewise-linear interpolant.  Only events with |k|_1 < K are kept.
std::vector<ResonanceEvent> detect_crossings(const std::vector<FreqSample>& samples, i64 K,
                                             const DetectConfig& config = {});

}  // namespace nekhoro
