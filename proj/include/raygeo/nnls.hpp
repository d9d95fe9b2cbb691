#pragma once

#include <Eigen/Dense>

namespace raygeo {

/// Non-negative least squares: argmin_{x >= 0} |A x - b|_2 via the
/// Lawson-Hanson active-set method. `tol` bounds the dual feasibility
/// check; non-positive means pick a scale from A automatically.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = -1.0, int max_iter = -1);

}  // namespace raygeo
