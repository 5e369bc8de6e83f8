#pragma once

#include <vector>

namespace nekhoro {

using Vec = std::vector<double>;

// Small dense row-major matrix; everything here is sized for n <= ~10.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

double dot(const Vec& x, const Vec& y);
double sup_norm(const Vec& x);
Vec matvec(const Mat& m, const Vec& x);

// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
// Sweeps until the off-diagonal Frobenius mass drops below 1e-12 relative
// to the matrix scale.
Vec jacobi_eigenvalues(Mat m);

// Smallest singular value via Jacobi on M^T M.
double smallest_singular_value(const Mat& m);

// In-place Gaussian elimination with partial pivoting; throws on a
// numerically singular system.
Vec solve_linear(Mat m, Vec rhs);

}  // namespace nekhoro
