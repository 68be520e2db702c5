#pragma once

#include <Eigen/Dense>

#include "vbifem/mesh.hpp"

namespace vbifem {

/// Non-rigid coherent point drift without an outlier component.
struct CpdParams {
  double kernel_width = 0.5;  // Gaussian kernel width, length units
  double lambda_reg = 2.0;    // smoothness weight
  int max_iter = 200;
  double tol = 1e-4;          // displacement increment threshold relative to bbox diagonal
  double sigma_floor = 0.0;   // <= 0 selects default_sigma_floor(target)

  void validate() const;
};

/// G(i, j) = exp(-|y_i - y_j|^2 / (2 kernel_width^2)).
Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& points, double kernel_width);

struct CpdResult {
  Eigen::MatrixXd displacement;  // one row per moving point
  int iterations = 0;
  bool converged = false;
  std::vector<double> sigma2_history;
};

/// EM loop: plain GMM responsibilities, (diag(pbar) G + lambda s2 I) W = P x - diag(pbar) y,
/// displacement = G W, then the same variance update as the FE-BL solver.
CpdResult cpd_register(const PointSet& moving, const PointSet& target, const CpdParams& params);

}  // namespace vbifem
