#pragma once

#include <Eigen/Dense>

namespace ra {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using VecI = Eigen::VectorXi;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Margin pair at a state: l <= 0 iff the state lies in the target set,
// g > 0 iff it lies in the failure set.  Cost convention: lower is better.
struct Margins {
  double l = 0.0;
  double g = 0.0;
};

inline double terminal_value(const Margins& m) { return std::max(m.l, m.g); }

}  // namespace ra
