#include "rmdp/linalg.hpp"

#include <cassert>
#include <cmath>

namespace rmdp {

std::optional<Vector> solve_dense(Matrix A, Vector b, double pivot_tol) {
    const Eigen::Index n = A.rows();
    assert(A.cols() == n && b.size() == n);

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        double best = std::abs(A(k, k));
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > best) {
                best = std::abs(A(i, k));
                p = i;
            }
        }
        if (best < pivot_tol) return std::nullopt;
        if (p != k) {
            A.row(k).swap(A.row(p));
            std::swap(b(k), b(p));
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double m = A(i, k) / A(k, k);
            if (m == 0.0) continue;
            A(i, k) = 0.0;
            for (Eigen::Index j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
            b(i) -= m * b(k);
        }
    }

    Vector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = b(i);
        for (Eigen::Index j = i + 1; j < n; ++j) s -= A(i, j) * x(j);
        x(i) = s / A(i, i);
    }
    return x;
}

double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace rmdp
