#include "emk/decoupler.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "emk/errors.hpp"

namespace emk {

PerpVector perp_vector(const Matrix& W, Index m) {
    const Index n = W.rows();
    if (W.cols() != n || m < 0 || m >= n)
        throw InvalidParameter("perp_vector: W must be square and m a valid row");
    if (n == 1) {
        // No other rows: the decoupled direction is just the sign of w_1.
        Vector h(1);
        h(0) = W(0, 0) >= 0.0 ? 1.0 : -1.0;
        return {h, m};
    }

    Matrix rest(n - 1, n);
    Index r = 0;
    for (Index j = 0; j < n; ++j) {
        if (j == m) continue;
        rest.row(r++) = W.row(j);
    }

    Eigen::JacobiSVD<Matrix> svd(rest, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(n - 2) < 1e-10 * sv(0))
        throw DegenerateDemixing("perp_vector: rows excluding m are rank deficient");

    // The (N-1) x N matrix has an N-th right singular vector spanning its
    // null space; that is h up to sign.
    Vector h = svd.matrixV().col(n - 1);
    const double along = h.dot(W.row(m));
    if (along == 0.0)
        throw DegenerateDemixing("perp_vector: w_m lies in the span of the other rows");
    if (along < 0.0) h = -h;
    return {std::move(h), m};
}

}  // namespace emk
