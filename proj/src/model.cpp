#include "nekhoro/model.hpp"

#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "nekhoro/errors.hpp"

namespace nekhoro {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Poly2::value(const Vec& I) const {
    double v = c0;
    for (size_t i = 0; i < c1.size(); ++i) v += c1[i] * I[i];
    if (c2.rows > 0)
        for (int i = 0; i < c2.rows; ++i)
            for (int j = 0; j < c2.cols; ++j) v += I[i] * c2.at(i, j) * I[j];
    return v;
}

Vec Poly2::gradient(const Vec& I) const {
    Vec g(I.size(), 0.0);
    for (size_t i = 0; i < c1.size(); ++i) g[i] += c1[i];
    if (c2.rows > 0)
        for (int i = 0; i < c2.rows; ++i)
            for (int j = 0; j < c2.cols; ++j) g[i] += 2.0 * c2.at(i, j) * I[j];
    return g;
}

double Poly2::coeff_bound(int n, double radius) const {
    double b = std::fabs(c0);
    for (size_t i = 0; i < c1.size(); ++i) b += std::fabs(c1[i]) * radius;
    if (c2.rows > 0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b += std::fabs(c2.at(i, j)) * radius * radius;
    return b;
}

double IntegrableModel::h(const Vec& I) const {
    double v = 0.0;
    for (int i = 0; i < dim(); ++i) {
        v += omega0[i] * I[i];
        for (int j = 0; j < dim(); ++j) v += 0.5 * I[i] * Q.at(i, j) * I[j];
    }
    return v;
}

Vec IntegrableModel::frequency(const Vec& I) const {
    Vec w = matvec(Q, I);
    for (int i = 0; i < dim(); ++i) w[i] += omega0[i];
    return w;
}

double Perturbation::value(const Vec& theta, const Vec& I) const {
    double v = 0.0;
    for (const Mode& m : modes) {
        double arg = m.phase;
        for (size_t j = 0; j < m.k.size(); ++j) arg += kTwoPi * static_cast<double>(m.k[j]) * theta[j];
        v += m.coeff.value(I) * std::cos(arg);
    }
    return v;
}

Vec Perturbation::d_dtheta(const Vec& theta, const Vec& I) const {
    Vec g(theta.size(), 0.0);
    for (const Mode& m : modes) {
        double arg = m.phase;
        for (size_t j = 0; j < m.k.size(); ++j) arg += kTwoPi * static_cast<double>(m.k[j]) * theta[j];
        const double factor = -m.coeff.value(I) * std::sin(arg) * kTwoPi;
        for (size_t j = 0; j < m.k.size(); ++j) g[j] += factor * static_cast<double>(m.k[j]);
    }
    return g;
}

Vec Perturbation::d_dI(const Vec& theta, const Vec& I) const {
    Vec g(I.size(), 0.0);
    for (const Mode& m : modes) {
        double arg = m.phase;
        for (size_t j = 0; j < m.k.size(); ++j) arg += kTwoPi * static_cast<double>(m.k[j]) * theta[j];
        const double c = std::cos(arg);
        const Vec cg = m.coeff.gradient(I);
        for (size_t j = 0; j < I.size(); ++j) g[j] += cg[j] * c;
    }
    return g;
}

double SystemSpec::energy(const Vec& theta, const Vec& I) const {
    return h.h(I) + epsilon * f.value(theta, I);
}

void SystemSpec::validate() const {
    const int n = dim();
    if (n < 1) throw std::invalid_argument("spec: dimension must be >= 1");
    if (h.Q.rows != n || h.Q.cols != n) throw std::invalid_argument("spec: Q must be n x n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::fabs(h.Q.at(i, j) - h.Q.at(j, i)) > 1e-12 * (1.0 + std::fabs(h.Q.at(i, j))))
                throw std::invalid_argument("spec: Q must be symmetric");
    if (!(epsilon >= 0)) throw std::invalid_argument("spec: epsilon must be >= 0");
    if (!(R > 0)) throw std::invalid_argument("spec: R must be > 0");
    if (m && !(*m > 0)) throw std::invalid_argument("spec: certified m must be > 0");
    for (const Mode& mode : f.modes) {
        if (static_cast<int>(mode.k.size()) != n)
            throw std::invalid_argument("spec: mode wave vector has wrong dimension");
        if (!mode.coeff.c1.empty() && static_cast<int>(mode.coeff.c1.size()) != n)
            throw std::invalid_argument("spec: mode coefficient c1 has wrong dimension");
        if (mode.coeff.c2.rows > 0 && (mode.coeff.c2.rows != n || mode.coeff.c2.cols != n))
            throw std::invalid_argument("spec: mode coefficient c2 has wrong dimension");
    }
    if (std::holds_alternative<AnalyticRegularity>(regularity)) {
        if (!(std::get<AnalyticRegularity>(regularity).s > 0))
            throw std::invalid_argument("spec: analytic width s must be > 0");
    } else {
        const auto& g = std::get<GevreyRegularity>(regularity);
        if (!(g.alpha >= 1) || !(g.L > 0))
            throw std::invalid_argument("spec: Gevrey parameters need alpha >= 1, L > 0");
    }
}

namespace {

using nlohmann::json;

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    Mat m(static_cast<int>(j.size()), j.empty() ? 0 : static_cast<int>(j[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(j[i].size()) != m.cols)
            throw std::invalid_argument("spec json: ragged matrix");
        for (int jj = 0; jj < m.cols; ++jj) m.at(i, jj) = j[i][jj].get<double>();
    }
    return m;
}

}  // namespace

std::string system_spec_to_json(const SystemSpec& spec) {
    json j;
    j["schema_version"] = SystemSpec::kSchemaVersion;
    j["n"] = spec.dim();
    j["Q"] = mat_to_json(spec.h.Q);
    j["omega0"] = spec.h.omega0;
    json modes = json::array();
    for (const Mode& m : spec.f.modes) {
        json jm;
        jm["k"] = m.k;
        json coeff;
        coeff["c0"] = m.coeff.c0;
        if (!m.coeff.c1.empty()) coeff["c1"] = m.coeff.c1;
        if (m.coeff.c2.rows > 0) coeff["c2"] = mat_to_json(m.coeff.c2);
        jm["coeff"] = coeff;
        jm["phase"] = m.phase;
        modes.push_back(jm);
    }
    j["modes"] = modes;
    j["epsilon"] = spec.epsilon;
    j["R"] = spec.R;
    if (std::holds_alternative<AnalyticRegularity>(spec.regularity)) {
        j["regularity"] = {{"type", "analytic"}, {"s", std::get<AnalyticRegularity>(spec.regularity).s}};
    } else {
        const auto& g = std::get<GevreyRegularity>(spec.regularity);
        j["regularity"] = {{"type", "gevrey"}, {"alpha", g.alpha}, {"L", g.L}};
    }
    if (spec.m) j["m"] = *spec.m;
    if (spec.M) j["M"] = *spec.M;
    return j.dump(2);
}

SystemSpec system_spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.contains("schema_version"))
        throw std::invalid_argument("spec json: missing schema_version");
    if (j["schema_version"].get<int>() != SystemSpec::kSchemaVersion)
        throw std::invalid_argument("spec json: unsupported schema_version");

    SystemSpec spec;
    const int n = j.at("n").get<int>();
    spec.h.Q = mat_from_json(j.at("Q"));
    spec.h.omega0 = j.at("omega0").get<Vec>();
    if (spec.h.Q.rows != n || static_cast<int>(spec.h.omega0.size()) != n)
        throw std::invalid_argument("spec json: inconsistent dimension");
    for (const json& jm : j.at("modes")) {
        Mode m;
        m.k = jm.at("k").get<IntVec>();
        const json& coeff = jm.at("coeff");
        m.coeff.c0 = coeff.value("c0", 0.0);
        if (coeff.contains("c1")) m.coeff.c1 = coeff["c1"].get<Vec>();
        if (coeff.contains("c2")) m.coeff.c2 = mat_from_json(coeff["c2"]);
        m.phase = jm.value("phase", 0.0);
        spec.f.modes.push_back(std::move(m));
    }
    spec.epsilon = j.at("epsilon").get<double>();
    spec.R = j.at("R").get<double>();
    const json& reg = j.at("regularity");
    const std::string type = reg.at("type").get<std::string>();
    if (type == "analytic")
        spec.regularity = AnalyticRegularity{reg.at("s").get<double>()};
    else if (type == "gevrey")
        spec.regularity = GevreyRegularity{reg.at("alpha").get<double>(), reg.at("L").get<double>()};
    else
        throw std::invalid_argument("spec json: unknown regularity type");
    if (j.contains("m")) spec.m = j["m"].get<double>();
    if (j.contains("M")) spec.M = j["M"].get<double>();
    spec.validate();
    return spec;
}

namespace {

// Orthonormal basis of the hyperplane orthogonal to omega, assembled by
// Gram-Schmidt over the canonical basis, skipping the index of the largest
// |omega| component.  Columns of the returned n x (n-1) matrix.
Mat orthogonal_complement(const Vec& omega) {
    const int n = static_cast<int>(omega.size());
    int skip = 0;
    for (int i = 1; i < n; ++i)
        if (std::fabs(omega[i]) > std::fabs(omega[skip])) skip = i;

    const double wn = std::sqrt(dot(omega, omega));
    Vec unit(n);
    for (int i = 0; i < n; ++i) unit[i] = omega[i] / wn;

    Mat P(n, n - 1);
    int col = 0;
    std::vector<Vec> basis;
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        Vec v(n, 0.0);
        v[i] = 1.0;
        double proj = dot(v, unit);
        for (int t = 0; t < n; ++t) v[t] -= proj * unit[t];
        for (const Vec& b : basis) {
            proj = dot(v, b);
            for (int t = 0; t < n; ++t) v[t] -= proj * b[t];
        }
        const double norm = std::sqrt(dot(v, v));
        for (int t = 0; t < n; ++t) v[t] /= norm;
        for (int t = 0; t < n; ++t) P.at(t, col) = v[t];
        basis.push_back(std::move(v));
        ++col;
    }
    return P;
}

void grid_points(const Vec& center, double radius, int per_axis, int axis, Vec& point,
                 const std::function<void(const Vec&)>& visit) {
    if (axis == static_cast<int>(center.size())) {
        visit(point);
        return;
    }
    for (int i = 0; i < per_axis; ++i) {
        point[axis] = per_axis == 1
                          ? center[axis]
                          : center[axis] - radius + 2.0 * radius * i / (per_axis - 1);
        grid_points(center, radius, per_axis, axis + 1, point, visit);
    }
}

}  // namespace

std::optional<double> qc_certificate(const IntegrableModel& model, const Vec& center,
                                     double radius, int grid_per_axis) {
    const int n = model.dim();
    if (grid_per_axis < 1) throw std::invalid_argument("qc_certificate: grid_per_axis must be >= 1");
    if (n == 1) {
        // The orthogonal complement of a nonzero frequency is trivial.
        const Vec w = model.frequency(center);
        if (sup_norm(w) == 0.0)
            throw degenerate_gradient_error("qc_certificate: frequency vanishes");
        return std::numeric_limits<double>::infinity();
    }

    bool failed = false;
    double worst = std::numeric_limits<double>::infinity();
    Vec point(n, 0.0);
    grid_points(center, radius, grid_per_axis, 0, point, [&](const Vec& I) {
        const Vec w = model.frequency(I);
        if (sup_norm(w) == 0.0)
            throw degenerate_gradient_error("qc_certificate: frequency vanishes at a grid point");
        const Mat P = orthogonal_complement(w);
        Mat proj(n - 1, n - 1);
        for (int a = 0; a < n - 1; ++a)
            for (int b = 0; b < n - 1; ++b) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) s += P.at(i, a) * model.Q.at(i, j) * P.at(j, b);
                proj.at(a, b) = s;
            }
        const Vec ev = jacobi_eigenvalues(std::move(proj));
        if (ev.front() <= 0.0) failed = true;
        worst = std::min(worst, ev.front());
    });
    if (failed) return std::nullopt;
    return worst;
}

double deriv_bound(const IntegrableModel& model, const Vec& center, double radius) {
    const int n = model.dim();
    double order1 = 0.0;
    const Vec gc = model.frequency(center);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::fabs(model.Q.at(i, j));
        order1 = std::max(order1, std::fabs(gc[i]) + radius * row);
    }
    double order2 = 0.0;
    for (double v : model.Q.a) order2 = std::max(order2, std::fabs(v));
    return std::max(order1, order2);  // order-3 derivatives vanish
}

double analytic_norm_bound(const Perturbation& f, double s, double action_radius) {
    if (!(s >= 0)) throw std::invalid_argument("analytic_norm_bound: s must be >= 0");
    double total = 0.0;
    for (const Mode& m : f.modes) {
        const int n = static_cast<int>(m.k.size());
        const double cb = m.coeff.coeff_bound(n, action_radius + s);
        total += cb * std::exp(kTwoPi * s * static_cast<double>(l1_norm(m.k)));
    }
    return total;
}

namespace {

// sum_{m >= 0} (L^alpha)^m c^m / (m!)^alpha, truncated once the geometric
// tail bound drops below tol times the partial sum.
double gevrey_angle_series(double c, double alpha, double L, double tol) {
    double term = 1.0;
    double sum = 1.0;
    const double base = std::pow(L, alpha) * c;
    for (int m = 0; m < 100000; ++m) {
        const double ratio = base / std::pow(static_cast<double>(m + 1), alpha);
        term *= ratio;
        sum += term;
        if (ratio < 1.0 && term / (1.0 - ratio) < tol * sum) break;
    }
    return sum;
}

}  // namespace

double gevrey_norm(const Perturbation& f, double alpha, double L, double tol,
                   double action_radius) {
    if (!(alpha >= 1)) throw std::invalid_argument("gevrey_norm: alpha must be >= 1");
    if (!(L > 0)) throw std::invalid_argument("gevrey_norm: L must be > 0");
    if (!(tol > 0)) throw std::invalid_argument("gevrey_norm: tol must be > 0");
    // Keep the per-series truncation well below the requested total accuracy.
    const double series_tol = tol * 1e-3;

    double total = 0.0;
    for (const Mode& m : f.modes) {
        const int n = static_cast<int>(m.k.size());
        const double R = action_radius;
        const double La = std::pow(L, alpha);

        // Action part: multi-indices of order <= 2 (higher derivatives vanish).
        double action_sum = m.coeff.coeff_bound(n, R);
        if (!m.coeff.c1.empty() || m.coeff.c2.rows > 0) {
            for (int i = 0; i < n; ++i) {
                double di = m.coeff.c1.empty() ? 0.0 : std::fabs(m.coeff.c1[i]);
                if (m.coeff.c2.rows > 0)
                    for (int j = 0; j < n; ++j) di += 2.0 * std::fabs(m.coeff.c2.at(i, j)) * R;
                action_sum += La * di;
            }
            if (m.coeff.c2.rows > 0) {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        const double d2 = 2.0 * std::fabs(m.coeff.c2.at(i, j));
                        const double lfact = (i == j) ? std::pow(2.0, alpha) : 1.0;
                        action_sum += La * La * d2 / lfact;
                    }
            }
        }

        // Angle part factorizes over coordinates.
        double angle_prod = 1.0;
        for (int j = 0; j < n; ++j) {
            const double c = kTwoPi * std::fabs(static_cast<double>(m.k[j]));
            if (c > 0) angle_prod *= gevrey_angle_series(c, alpha, L, series_tol);
        }

        total += action_sum * angle_prod;
    }
    return total;
}

double perturbation_norm(const SystemSpec& spec) {
    if (std::holds_alternative<AnalyticRegularity>(spec.regularity))
        return analytic_norm_bound(spec.f, std::get<AnalyticRegularity>(spec.regularity).s, spec.R);
    const auto& g = std::get<GevreyRegularity>(spec.regularity);
    return gevrey_norm(spec.f, g.alpha, g.L, 1e-12, spec.R);
}

}  // namespace nekhoro
