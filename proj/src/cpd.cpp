#include "vbifem/cpd.hpp"

#include <cmath>

#include "vbifem/error.hpp"
#include "vbifem/probabilistic.hpp"

namespace vbifem {

void CpdParams::validate() const {
  if (!(kernel_width > 0.0)) throw Error("kernel_width must be positive");
  if (!(lambda_reg > 0.0)) throw Error("lambda_reg must be positive");
  if (max_iter < 0) throw Error("max_iter must be non-negative");
  if (!(tol > 0.0)) throw Error("tol must be positive");
}

Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& points, double kernel_width) {
  if (!(kernel_width > 0.0)) throw Error("kernel_width must be positive");
  const Index n = points.rows();
  Eigen::MatrixXd g(n, n);
  const double scale = 1.0 / (2.0 * kernel_width * kernel_width);
  for (Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) {
      const double v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() * scale);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

CpdResult cpd_register(const PointSet& moving, const PointSet& target, const CpdParams& params) {
  params.validate();
  if (moving.size() == 0 || target.size() == 0) throw Error("empty point set");
  if (moving.points.cols() != target.points.cols()) throw Error("point set dimensions differ");

  const Eigen::MatrixXd& y = moving.points;
  const Index m = y.rows();
  const Eigen::MatrixXd g = gaussian_kernel(y, params.kernel_width);
  const double floor = params.sigma_floor > 0.0 ? params.sigma_floor : default_sigma_floor(target);
  const double stop = params.tol * bbox_diagonal(y);
  const Eigen::VectorXd unit_weights = Eigen::VectorXd::Ones(m);

  CpdResult result;
  result.displacement = Eigen::MatrixXd::Zero(m, y.cols());
  double sigma2 = std::max(initial_sigma2(y, target), floor);
  for (int it = 0; it < params.max_iter; ++it) {
    const Eigen::MatrixXd current = y + result.displacement;
    const ResponsibilityMatrix p = responsibilities(current, target, sigma2, unit_weights);
    const Eigen::VectorXd pbar = equivalent_probability(p);

    Eigen::MatrixXd lhs = pbar.asDiagonal() * g;
    lhs.diagonal().array() += params.lambda_reg * sigma2;
    const Eigen::MatrixXd rhs = p.values * target.points - pbar.asDiagonal() * y;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    const Eigen::MatrixXd w = lu.solve(rhs);
    if (!w.allFinite()) throw Error("singular CPD system");

    const Eigen::MatrixXd next = g * w;
    sigma2 = update_sigma(p, y + next, target, floor);
    result.sigma2_history.push_back(sigma2);
    const double increment = (next - result.displacement).norm();
    result.displacement = next;
    result.iterations = it + 1;
    if (increment <= stop) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace vbifem
