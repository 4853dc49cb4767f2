#pragma once

#include <Eigen/Dense>

namespace multisym::detail {

// Cofactor expansion up to 3x3, partial-pivot LU beyond.
inline double determinant(const Eigen::MatrixXd& m) {
  switch (m.rows()) {
    case 0:
      return 1.0;
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(2, 1) * m(1, 2)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(2, 0) * m(1, 2)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(2, 0) * m(1, 1));
    default:
      return m.partialPivLu().determinant();
  }
}

}  // namespace multisym::detail
