#include "emk/preprocess.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "emk/errors.hpp"

namespace emk {

Matrix WhiteningTransform::apply(const Matrix& X) const {
    return forward * (X.colwise() - mean);
}

CenterResult center(const Matrix& X) {
    if (!X.allFinite()) throw InvalidData("center: input has non-finite entries");
    if (X.cols() < 2) throw TooFewSamples("center: need at least 2 samples");
    Vector mean = X.rowwise().mean();
    return {X.colwise() - mean, std::move(mean)};
}

WhitenResult whiten(const Matrix& Xc) {
    const Index n = Xc.rows();
    const Index t = Xc.cols();
    const Matrix cov = (Xc * Xc.transpose()) / static_cast<double>(t - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success)
        throw RankDeficient("whiten: eigendecomposition failed");

    const Vector evals = eig.eigenvalues();  // ascending
    const double emax = evals(n - 1);
    if (!(emax > 0.0) || evals(0) < 1e-12 * emax)
        throw RankDeficient("whiten: covariance eigenvalue below 1e-12 of the largest; "
                            "fewer effective sources than channels");

    // Fix each eigenvector's sign: largest-magnitude component positive.
    // The symmetric factor below is invariant to these signs, but pinning
    // them keeps the intermediate decomposition reproducible.
    Matrix E = eig.eigenvectors();
    for (Index j = 0; j < n; ++j) {
        Index imax;
        E.col(j).cwiseAbs().maxCoeff(&imax);
        if (E(imax, j) < 0.0) E.col(j) = -E.col(j);
    }

    // Symmetric (zero-phase) whitening V = E D^{-1/2} E^T: among all valid
    // whiteners this is the one closest to the identity, so already-white
    // data passes through essentially unchanged instead of picking up an
    // arbitrary rotation from a degenerate eigenbasis.
    const Vector inv_sqrt = evals.cwiseSqrt().cwiseInverse();
    WhiteningTransform transform;
    transform.mean = Vector::Zero(n);
    transform.forward = E * inv_sqrt.asDiagonal() * E.transpose();
    transform.inverse = E * evals.cwiseSqrt().asDiagonal() * E.transpose();
    return {transform.forward * Xc, std::move(transform)};
}

}  // namespace emk
