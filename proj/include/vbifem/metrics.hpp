#pragma once

#include <string>

#include <Eigen/Dense>

#include "vbifem/mesh.hpp"
#include "vbifem/solver.hpp"

namespace vbifem {

struct ErrorReport {
  double mean_abs_error = 0.0;   // e-bar = mean_i |x_i^truth - x_i^recovered|
  Eigen::VectorXd per_node;      // e_i
  double relative_percent = 0.0; // 100 e-bar / mean |x_i^truth - x_i^start|
  Index count = 0;
};

/// Average nodal deformation error between corresponding rows. `start` holds the positions
/// before recovery; it sets the denominator of relative_percent, which is NaN when `start`
/// is empty. A zero true displacement gives 0 for a perfect recovery and +inf otherwise.
ErrorReport average_nodal_error(const Eigen::MatrixXd& recovered, const Eigen::MatrixXd& truth,
                                const Eigen::MatrixXd& start = Eigen::MatrixXd());

/// CSV with header `iter,sigma2,potential,increment` and one row per iteration.
std::string convergence_log(const RecoveryResult& result);

}  // namespace vbifem
