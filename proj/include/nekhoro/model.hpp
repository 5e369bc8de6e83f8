#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nekhoro/checked_int.hpp"
#include "nekhoro/lattice.hpp"
#include "nekhoro/linalg.hpp"

namespace nekhoro {

// Polynomial in the actions of total degree <= 2:
//   value(I) = c0 + c1.I + I^t C2 I,  C2 symmetric (possibly empty = zero).
struct Poly2 {
    double c0 = 0.0;
    Vec c1;   // length n, may be empty
    Mat c2;   // n x n symmetric, may be empty

    double value(const Vec& I) const;
    Vec gradient(const Vec& I) const;  // c1 + 2 C2 I
    // Triangle-inequality bound for |value| on the centered sup-ball of
    // the given radius (valid on the complex polydisc of the same radius).
    double coeff_bound(int n, double radius) const;
};

// Integrable part h(I) = I^t Q I / 2 + omega0.I with constant Hessian Q.
struct IntegrableModel {
    Mat Q;       // n x n symmetric
    Vec omega0;  // length n

    int dim() const { return static_cast<int>(omega0.size()); }
    double h(const Vec& I) const;
    Vec frequency(const Vec& I) const;  // gradient Q I + omega0
};

// One Fourier mode of the perturbation: coeff(I) * cos(2 pi k.theta + phase).
struct Mode {
    IntVec k;
    Poly2 coeff;
    double phase = 0.0;
};

// f(theta, I) = sum of modes; angles live on R^n / Z^n.
struct Perturbation {
    std::vector<Mode> modes;

    double value(const Vec& theta, const Vec& I) const;
    Vec d_dtheta(const Vec& theta, const Vec& I) const;
    Vec d_dI(const Vec& theta, const Vec& I) const;
};

struct AnalyticRegularity {
    double s = 0.0;
};
struct GevreyRegularity {
    double alpha = 1.0;
    double L = 0.0;
};
using Regularity = std::variant<AnalyticRegularity, GevreyRegularity>;

// A complete near-integrable system H = h + epsilon * f on T^n x B(0, R).
struct SystemSpec {
    static constexpr int kSchemaVersion = 1;

    IntegrableModel h;
    Perturbation f;
    double epsilon = 0.0;
    double R = 1.0;
    Regularity regularity = AnalyticRegularity{1.0};
    std::optional<double> m;  // certified quasi-convexity constant
    std::optional<double> M;  // certified derivative bound

    int dim() const { return h.dim(); }
    double energy(const Vec& theta, const Vec& I) const;
    void validate() const;  // throws std::invalid_argument on bad data
};

// JSON (de)serialization; schema_version is mandatory on input.
std::string system_spec_to_json(const SystemSpec& spec);
SystemSpec system_spec_from_json(const std::string& text);

// Certified lower bound for the projected-Hessian eigenvalues over a grid on
// the sup-ball (center, radius), grid_per_axis points per axis.  Returns
// nullopt when some projected eigenvalue is <= 0; throws
// degenerate_gradient_error when the frequency vanishes at a grid point.
// For constant-Hessian models the grid value is exact.
std::optional<double> qc_certificate(const IntegrableModel& model, const Vec& center,
                                     double radius, int grid_per_axis);

// Sup bound for derivative entries of h up to order 3 on the sup-ball
// (closed form for quadratic h: order 3 vanishes).
double deriv_bound(const IntegrableModel& model, const Vec& center, double radius);

// Upper bound for the analytic sup-norm of f on the complex strip of width s
// around T^n x B(0, action_radius).
double analytic_norm_bound(const Perturbation& f, double s, double action_radius);

// Truncated Gevrey norm sum_l L^(|l| alpha) (l!)^-alpha sup|d^l f| over
// T^n x B(0, action_radius); deterministic truncation once the tail bound
// falls below tol times the partial sum.
double gevrey_norm(const Perturbation& f, double alpha, double L, double tol,
                   double action_radius);

// Norm of f under the regularity declared by the spec (used for the
// normalization convention |eps * f| < eps).
double perturbation_norm(const SystemSpec& spec);

}  // namespace nekhoro
