#pragma once

#include <Eigen/Dense>

#include "mlrtg/tensor.hpp"

namespace mlrtg {

// ||vec(y) - vec(y_star)||_2 / ||vec(y_star)||_2.
double recon_error(const DenseTensor& y, const DenseTensor& y_star);

// Relative l2 error of the first k_star singular values of the mode-mu
// matricizations (sigma descending).
double singular_value_error(const DenseTensor& y, const DenseTensor& y_star,
                            int mode, Index k_star);

// Largest principal angle (radians) between the spans of the first `count`
// columns: arccos of the smallest singular value of V(:,1:count)^T U(:,1:count).
double subspace_angle(const Eigen::MatrixXd& V, const Eigen::MatrixXd& U, Index count);

// |v_i^T u_i| per column, i = 1..count.
Eigen::VectorXd alignment_diag(const Eigen::MatrixXd& V, const Eigen::MatrixXd& U,
                               Index count);

}  // namespace mlrtg
