#ifndef EMK_TYPES_HPP
#define EMK_TYPES_HPP

#include <Eigen/Dense>

namespace emk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace emk

#endif
