#ifndef EMK_PREPROCESS_HPP
#define EMK_PREPROCESS_HPP

#include "emk/types.hpp"

namespace emk {

/// Affine transform taking raw observations to whitened coordinates:
/// Z = forward * (X - mean), with inverse * forward = I.
struct WhiteningTransform {
    Vector mean;     // per-channel means of the raw data
    Matrix forward;  // V such that cov(V * Xc) = I
    Matrix inverse;  // V^-1

    /// Applies the transform to a raw observation matrix.
    Matrix apply(const Matrix& X) const;
};

struct CenterResult {
    Matrix centered;
    Vector mean;
};

/// Removes the per-row sample mean.
/// Throws InvalidData on non-finite entries, TooFewSamples for T < 2.
CenterResult center(const Matrix& X);

struct WhitenResult {
    Matrix Z;
    WhiteningTransform transform;
};

/// Whitens centered data via eigendecomposition of the unbiased sample
/// covariance, V = D^{-1/2} E^T. Eigenvector signs are fixed so the
/// largest-magnitude component of each eigenvector is positive, making the
/// factorization reproducible across platforms.
/// Throws RankDeficient when an eigenvalue falls below 1e-12 times the
/// largest one.
WhitenResult whiten(const Matrix& Xc);

}  // namespace emk

#endif
