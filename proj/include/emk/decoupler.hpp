#ifndef EMK_DECOUPLER_HPP
#define EMK_DECOUPLER_HPP

#include "emk/types.hpp"

namespace emk {

/// Unit vector perpendicular to every row of W except row m, with the sign
/// fixed so that h . w_m > 0. |h^T w_m| times the volume spanned by the other
/// rows equals |det W|, which is what lets each row be optimized on its own.
struct PerpVector {
    Vector h;
    Index row_index;
};

/// Computes the perpendicular vector for row m as the null-space direction of
/// the (N-1) x N matrix of remaining rows (via SVD).
/// Throws DegenerateDemixing when the remaining rows are numerically rank
/// deficient (smallest singular value below 1e-10 of the largest) or when
/// w_m itself has no component along the null direction.
PerpVector perp_vector(const Matrix& W, Index m);

}  // namespace emk

#endif
