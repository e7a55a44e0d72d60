#include "emk/measuring.hpp"

#include <cmath>

#include "emk/errors.hpp"

namespace emk {

void MeasuringSpec::validate() const {
    if (static_cast<int>(locals.size()) > kMaxLocals)
        throw InvalidParameter("MeasuringSpec: at most 5 local kernels");
    for (const auto& k : locals) {
        if (!(k.sigma > 0.0) || !std::isfinite(k.sigma) || !std::isfinite(k.mu))
            throw InvalidParameter("MeasuringSpec: kernel needs finite mu and sigma > 0");
    }
}

Vector eval_measuring(double y, const MeasuringSpec& spec) {
    Vector r(spec.size());
    r(0) = 1.0;
    r(1) = y;
    r(2) = y * y;
    r(3) = y / (1.0 + y * y);
    for (std::size_t j = 0; j < spec.locals.size(); ++j) {
        const double d = (y - spec.locals[j].mu) / spec.locals[j].sigma;
        r(4 + static_cast<Index>(j)) = std::exp(-0.5 * d * d);
    }
    return r;
}

Vector eval_measuring_deriv(double y, const MeasuringSpec& spec) {
    Vector d(spec.size());
    const double y2 = y * y;
    const double denom = 1.0 + y2;
    d(0) = 0.0;
    d(1) = 1.0;
    d(2) = 2.0 * y;
    d(3) = (1.0 - y2) / (denom * denom);
    for (std::size_t j = 0; j < spec.locals.size(); ++j) {
        const double s2 = spec.locals[j].sigma * spec.locals[j].sigma;
        const double u = y - spec.locals[j].mu;
        d(4 + static_cast<Index>(j)) = -(u / s2) * std::exp(-0.5 * u * u / s2);
    }
    return d;
}

Matrix eval_measuring_matrix(const Vector& points, const MeasuringSpec& spec) {
    const Index p = points.size();
    Matrix R(spec.size(), p);
    R.row(0).setOnes();
    R.row(1) = points.transpose();
    R.row(2) = points.array().square().transpose();
    R.row(3) = (points.array() / (1.0 + points.array().square())).transpose();
    for (std::size_t j = 0; j < spec.locals.size(); ++j) {
        const double inv_s = 1.0 / spec.locals[j].sigma;
        R.row(4 + static_cast<Index>(j)) =
            (-0.5 * ((points.array() - spec.locals[j].mu) * inv_s).square())
                .exp()
                .transpose();
    }
    return R;
}

Matrix eval_measuring_deriv_matrix(const Vector& points, const MeasuringSpec& spec) {
    const Index p = points.size();
    Matrix D(spec.size(), p);
    D.row(0).setZero();
    D.row(1).setOnes();
    D.row(2) = 2.0 * points.transpose();
    const auto y2 = points.array().square();
    D.row(3) = ((1.0 - y2) / (1.0 + y2).square()).transpose();
    for (std::size_t j = 0; j < spec.locals.size(); ++j) {
        const double s2 = spec.locals[j].sigma * spec.locals[j].sigma;
        const auto u = points.array() - spec.locals[j].mu;
        D.row(4 + static_cast<Index>(j)) =
            (-(u / s2) * (-0.5 * u.square() / s2).exp()).transpose();
    }
    return D;
}

}  // namespace emk
