#include "nekhoro/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nekhoro/errors.hpp"

namespace nekhoro {

FrequencyPoint make_frequency_point(Vec omega) {
    if (sup_norm(omega) == 0.0)
        throw degenerate_gradient_error("frequency point: omega is zero");
    int idx = 0;
    for (size_t i = 1; i < omega.size(); ++i)
        if (std::fabs(omega[i]) > std::fabs(omega[idx])) idx = static_cast<int>(i);
    return {std::move(omega), idx};
}

std::pair<double, Vec> psi_h(const IntegrableModel& model, const Vec& I, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("psi_h: lambda must be > 0");
    Vec w = model.frequency(I);
    for (double& c : w) c *= lambda;
    return {model.h(I), std::move(w)};
}

std::optional<double> psi_h_nondegenerate(const IntegrableModel& model, const Vec& I,
                                          double lambda, double tol) {
    if (!(lambda > 0)) throw std::invalid_argument("psi_h_nondegenerate: lambda must be > 0");
    const int n = model.dim();
    const Vec w = model.frequency(I);

    // d psi_h (v, u) = (omega.v, u omega + lambda Q v) in the canonical basis.
    Mat J(n + 1, n + 1);
    for (int j = 0; j < n; ++j) J.at(0, j) = w[j];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) J.at(i + 1, j) = lambda * model.Q.at(i, j);
        J.at(i + 1, n) = w[i];
    }
    const double sigma = smallest_singular_value(J);
    if (sigma < tol) return std::nullopt;
    return sigma;
}

namespace {

// Enumerates canonical-sign vectors in lexicographic order and keeps the
// primitive minimizer of |k . omega|.
struct DivisorScan {
    const Vec& omega;
    i64 K;
    IntVec best_k;
    double best = 0.0;
    bool found = false;

    void visit(const IntVec& k) {
        i64 g = 0;
        bool leading_positive = false, seen_nonzero = false;
        for (i64 c : k) {
            if (!seen_nonzero && c != 0) {
                seen_nonzero = true;
                leading_positive = c > 0;
            }
            g = gcd_i64(g, c);
        }
        if (!seen_nonzero || !leading_positive || g != 1) return;
        double v = 0.0;
        for (size_t i = 0; i < k.size(); ++i) v += static_cast<double>(k[i]) * omega[i];
        v = std::fabs(v);
        if (!found || v < best) {
            found = true;
            best = v;
            best_k = k;
        }
    }

    void recurse(IntVec& k, size_t pos) {
        if (pos == k.size()) {
            visit(k);
            return;
        }
        i64 used = 0;
        for (size_t i = 0; i < pos; ++i) used += checked_abs(k[i]);
        const i64 room = K - used;
        for (i64 c = -room; c <= room; ++c) {
            k[pos] = c;
            recurse(k, pos + 1);
        }
    }
};

}  // namespace

SmallDivisor small_divisor(const Vec& omega, i64 K, i64 budget) {
    if (sup_norm(omega) == 0.0) throw std::invalid_argument("small_divisor: omega is zero");
    if (K < 1) throw std::invalid_argument("small_divisor: K must be >= 1");
    const int n = static_cast<int>(omega.size());
    double raw = 1.0;
    for (int i = 0; i < n; ++i) raw *= static_cast<double>(2 * K + 1);
    if (raw > static_cast<double>(budget))
        throw budget_exceeded("small_divisor: enumeration budget exceeded");

    DivisorScan scan{omega, K, {}, 0.0, false};
    IntVec k(n, 0);
    scan.recurse(k, 0);
    return {std::move(scan.best_k), scan.best};
}

std::optional<IntVec> in_RK(const Vec& omega, i64 K, double tol, i64 budget) {
    const SmallDivisor sd = small_divisor(omega, K, budget);
    if (sd.value <= tol * sup_norm(omega)) return sd.k;
    return std::nullopt;
}

namespace {

int sup_index_of(const Vec& w) {
    int idx = 0;
    for (size_t i = 1; i < w.size(); ++i)
        if (std::fabs(w[i]) > std::fabs(w[idx])) idx = static_cast<int>(i);
    return idx;
}

Vec interp(const FreqSample& a, const FreqSample& b, double t) {
    const double s = (t - a.t) / (b.t - a.t);
    Vec w(a.omega.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = a.omega[i] + s * (b.omega[i] - a.omega[i]);
    return w;
}

// Bisection for a sign change of g on [lo, hi]; g is continuous and the
// endpoint values straddle zero (one may be zero).
template <typename G>
double bisect(G&& g, double lo, double hi, double tol) {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((glo < 0) != (gm < 0)) {
            hi = mid;
            ghi = gm;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

struct Candidate {
    double t;
    IntVec k;
    double bracket_lo, bracket_hi;
    bool index_switch;
};

// Reduce to the canonical primitive representative; empty result for k = 0.
IntVec canonical_primitive(IntVec k) {
    i64 g = 0;
    for (i64 c : k) g = gcd_i64(g, c);
    if (g == 0) return {};
    if (g > 1)
        for (i64& c : k) c /= g;
    return canonical_sign(k);
}

}  // namespace

std::vector<ResonanceEvent> detect_crossings(const std::vector<FreqSample>& samples, i64 K,
                                             const DetectConfig& config) {
    const int N = static_cast<int>(samples.size());
    if (N < 2) return {};
    const int n = static_cast<int>(samples[0].omega.size());
    for (int s = 0; s < N; ++s) {
        if (sup_norm(samples[s].omega) == 0.0)
            throw std::invalid_argument("detect_crossings: omega vanishes at a sample");
        if (s > 0 && !(samples[s].t > samples[s - 1].t))
            throw std::invalid_argument("detect_crossings: samples not time-ordered");
    }

    std::vector<int> sup_idx(N);
    std::vector<std::vector<double>> ratio(n, std::vector<double>(N));
    for (int s = 0; s < N; ++s) {
        sup_idx[s] = sup_index_of(samples[s].omega);
        const double scale = std::fabs(samples[s].omega[sup_idx[s]]);
        for (int i = 0; i < n; ++i) ratio[i][s] = samples[s].omega[i] / scale;
    }

    std::vector<Candidate> cands;

    // Sup-index switches are boundary crossings of the ratio map (level +-1):
    // at the switch |omega_a| = |omega_b|.
    for (int s = 0; s + 1 < N; ++s) {
        const int ja = sup_idx[s], jb = sup_idx[s + 1];
        if (ja == jb) continue;
        const FreqSample& A = samples[s];
        const FreqSample& B = samples[s + 1];
        auto gap = [&](double t) {
            const Vec w = interp(A, B, t);
            return std::fabs(w[ja]) - std::fabs(w[jb]);
        };
        const double t_sw = bisect(gap, A.t, B.t, config.bisect_tol);
        const Vec w = interp(A, B, t_sw);
        IntVec k(n, 0);
        k[ja] = w[ja] >= 0 ? 1 : -1;
        k[jb] = w[jb] >= 0 ? -1 : 1;
        cands.push_back({t_sw, canonical_primitive(std::move(k)), A.t, B.t, true});
    }

    // Sliding-window rational levels.
    const int W = std::max(2, config.window);
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a + W <= N; ++a) {
            double rmin = ratio[i][a], rmax = ratio[i][a];
            for (int s = a + 1; s < a + W; ++s) {
                rmin = std::min(rmin, ratio[i][s]);
                rmax = std::max(rmax, ratio[i][s]);
            }
            if (rmax - rmin < config.l) continue;

            const double half = config.l / 2;
            const double x = std::clamp(0.5 * (rmin + rmax), -1.0 + half, 1.0 - half);
            const Fraction f = rational_in_interval(x, config.l);
            const double level = static_cast<double>(f.p) / static_cast<double>(f.q);

            for (int s = a; s + 1 < a + W; ++s) {
                const double ga = ratio[i][s] - level;
                const double gb = ratio[i][s + 1] - level;
                if (ga == 0.0 && gb == 0.0) continue;
                if ((ga < 0 && gb < 0) || (ga > 0 && gb > 0)) continue;

                // Split the bracket at a sup-index switch so each piece has a
                // fixed reference coordinate j.
                const FreqSample& A = samples[s];
                const FreqSample& B = samples[s + 1];
                std::vector<std::pair<double, double>> pieces;
                bool switched = sup_idx[s] != sup_idx[s + 1];
                if (switched) {
                    const int ja = sup_idx[s], jb = sup_idx[s + 1];
                    auto gap = [&](double t) {
                        const Vec w = interp(A, B, t);
                        return std::fabs(w[ja]) - std::fabs(w[jb]);
                    };
                    const double t_sw = bisect(gap, A.t, B.t, config.bisect_tol);
                    pieces.push_back({A.t, t_sw});
                    pieces.push_back({t_sw, B.t});
                } else {
                    pieces.push_back({A.t, B.t});
                }

                for (const auto& [lo, hi] : pieces) {
                    if (!(hi > lo)) continue;
                    const Vec wm = interp(A, B, 0.5 * (lo + hi));
                    const int j = sup_index_of(wm);
                    const i64 p_adj = wm[j] < 0 ? checked_neg(f.p) : f.p;
                    auto g = [&](double t) {
                        const Vec w = interp(A, B, t);
                        return static_cast<double>(f.q) * w[i] - static_cast<double>(p_adj) * w[j];
                    };
                    const double glo = g(lo), ghi = g(hi);
                    if ((glo < 0 && ghi < 0) || (glo > 0 && ghi > 0)) continue;
                    if (glo == 0.0 && ghi == 0.0) continue;
                    const double t_root = bisect(g, lo, hi, config.bisect_tol);

                    IntVec k(n, 0);
                    k[i] = checked_add(k[i], f.q);
                    k[j] = checked_sub(k[j], p_adj);
                    cands.push_back({t_root, canonical_primitive(std::move(k)), lo, hi, switched});
                }
            }
        }
    }

    // Keep admissible candidates, verify the residual at the refined time,
    // and merge duplicates (same k within bisection tolerance).
    std::vector<ResonanceEvent> events;
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.k < b.k;
    });
    for (const Candidate& c : cands) {
        if (c.k.empty() || l1_norm(c.k) >= K) continue;

        // Residual against the interpolated frequency at the refined time.
        int seg = static_cast<int>(std::upper_bound(samples.begin(), samples.end(), c.t,
                                                    [](double t, const FreqSample& s) {
                                                        return t < s.t;
                                                    }) -
                                   samples.begin()) -
                  1;
        seg = std::clamp(seg, 0, N - 2);
        const Vec w = interp(samples[seg], samples[seg + 1], c.t);
        double r = 0.0;
        for (int t = 0; t < n; ++t) r += static_cast<double>(c.k[t]) * w[t];
        r = std::fabs(r);
        if (r > config.residual_rel_tol * sup_norm(w)) continue;

        bool duplicate = false;
        const double merge_window = 100 * config.bisect_tol;
        for (auto it = events.rbegin(); it != events.rend(); ++it) {
            if (it->time < c.t - merge_window) break;
            if (it->k == c.k && std::fabs(it->time - c.t) <= merge_window) {
                duplicate = true;
                it->index_switch = it->index_switch && c.index_switch;
                break;
            }
        }
        if (duplicate) continue;

        events.push_back({c.t, c.k, r, c.bracket_lo, c.bracket_hi, c.index_switch});
    }
    std::sort(events.begin(), events.end(),
              [](const ResonanceEvent& a, const ResonanceEvent& b) { return a.time < b.time; });
    return events;
}

}  // namespace nekhoro
