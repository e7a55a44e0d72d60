#ifndef EMK_ERRORS_HPP
#define EMK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emk {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input contains NaN or infinite entries.
struct InvalidData : Error {
    using Error::Error;
};

/// Fewer samples than the operation can work with.
struct TooFewSamples : Error {
    using Error::Error;
};

/// Sample covariance is numerically rank deficient; there are fewer
/// effective sources than channels.
struct RankDeficient : Error {
    using Error::Error;
};

/// Newton Jacobian condition number exceeded the trust threshold.
struct SingularJacobian : Error {
    using Error::Error;
};

/// An iterative solve did not reach its tolerance within the iteration cap.
struct NoConvergence : Error {
    using Error::Error;
};

/// The demixing matrix has (nearly) collapsed: the rows excluding the one
/// being updated no longer span an (N-1)-dimensional subspace, or the
/// perpendicular component of the current row is numerically zero.
struct DegenerateDemixing : Error {
    using Error::Error;
};

/// A row update step produced a vector too short to renormalize.
struct StepCollapse : Error {
    using Error::Error;
};

/// Generator parameter outside its documented range.
struct InvalidParameter : Error {
    using Error::Error;
};

/// Could not draw an acceptably conditioned random mixing matrix.
struct IllConditioned : Error {
    using Error::Error;
};

/// Gain matrix row has a zero entry in its assigned signal column.
struct DegenerateGain : Error {
    using Error::Error;
};

/// A row with zero variance cannot be correlated or paired.
struct DegenerateSource : Error {
    using Error::Error;
};

/// Every per-source density fit failed in one optimizer iteration.
struct DensityFailure : Error {
    using Error::Error;
};

/// File could not be read, written, or parsed.
struct IoError : Error {
    using Error::Error;
};

}  // namespace emk

#endif
