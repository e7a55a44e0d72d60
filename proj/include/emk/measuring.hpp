#ifndef EMK_MEASURING_HPP
#define EMK_MEASURING_HPP

#include <vector>

#include "emk/types.hpp"

namespace emk {

/// One adaptive local constraint: a Gaussian kernel exp(-(y-mu)^2 / 2 sigma^2).
struct LocalKernel {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Ordered list of measuring functions: four fixed globals
/// {1, y, y^2, y/(1+y^2)} followed by up to five local Gaussian kernels.
struct MeasuringSpec {
    static constexpr int kGlobals = 4;
    static constexpr int kMaxLocals = 5;

    std::vector<LocalKernel> locals;

    int size() const { return kGlobals + static_cast<int>(locals.size()); }

    /// Throws InvalidParameter if a kernel has sigma <= 0, a non-finite
    /// parameter, or there are more than kMaxLocals kernels.
    void validate() const;
};

/// Evaluates all measuring functions at y, in spec order.
Vector eval_measuring(double y, const MeasuringSpec& spec);

/// Evaluates the derivatives dr_i/dy at y, in spec order.
Vector eval_measuring_deriv(double y, const MeasuringSpec& spec);

/// Evaluates every measuring function at every point: M x P matrix with
/// R(i, p) = r_i(points[p]). This is the layout the Newton solver and the
/// gradient consume.
Matrix eval_measuring_matrix(const Vector& points, const MeasuringSpec& spec);

/// Derivative counterpart of eval_measuring_matrix.
Matrix eval_measuring_deriv_matrix(const Vector& points, const MeasuringSpec& spec);

}  // namespace emk

#endif
