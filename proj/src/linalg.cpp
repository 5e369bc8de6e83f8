#include "nekhoro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nekhoro {

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double sup_norm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::fabs(v));
    return s;
}

Vec matvec(const Mat& m, const Vec& x) {
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m.at(i, j) * x[j];
    return r;
}

namespace {

double off_diagonal_frobenius(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (i != j) s += m.at(i, j) * m.at(i, j);
    return std::sqrt(s);
}

double frobenius(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

}  // namespace

Vec jacobi_eigenvalues(Mat m) {
    const int n = m.rows;
    if (n == 0) return {};
    const double scale = std::max(1.0, frobenius(m));
    const double threshold = 1e-12 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_diagonal_frobenius(m) <= threshold) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m.at(k, p), mkq = m.at(k, q);
                    m.at(k, p) = c * mkp - s * mkq;
                    m.at(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m.at(p, k), mqk = m.at(q, k);
                    m.at(p, k) = c * mpk - s * mqk;
                    m.at(q, k) = s * mpk + c * mqk;
                }
            }
    }

    Vec ev(n);
    for (int i = 0; i < n; ++i) ev[i] = m.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double smallest_singular_value(const Mat& m) {
    Mat mtm(m.cols, m.cols);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < m.cols; ++j) {
            double s = 0.0;
            for (int k = 0; k < m.rows; ++k) s += m.at(k, i) * m.at(k, j);
            mtm.at(i, j) = s;
        }
    const Vec ev = jacobi_eigenvalues(std::move(mtm));
    return std::sqrt(std::max(0.0, ev.front()));
}

Vec solve_linear(Mat m, Vec rhs) {
    const int n = m.rows;
    if (m.cols != n || static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_linear: shape mismatch");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m.at(i, k)) > std::fabs(m.at(piv, k))) piv = i;
        if (m.at(piv, k) == 0.0) throw std::runtime_error("solve_linear: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            std::swap(rhs[k], rhs[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m.at(i, k) / m.at(k, k);
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    Vec x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= m.at(i, j) * x[j];
        x[i] = s / m.at(i, i);
    }
    return x;
}

}  // namespace nekhoro
