#include "vbifem/sparse.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vbifem/error.hpp"

namespace vbifem {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double smallest_ritz_value(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
  if (k == 0) return 0.0;
  Eigen::VectorXd diag(k);
  Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index j = 0; j < k; ++j) {
    diag(j) = 1.0 / alpha[static_cast<std::size_t>(j)];
    if (j > 0) diag(j) += beta[static_cast<std::size_t>(j - 1)] / alpha[static_cast<std::size_t>(j - 1)];
    if (j + 1 < k) sub(j) = std::sqrt(beta[static_cast<std::size_t>(j)]) / alpha[static_cast<std::size_t>(j)];
  }
  if (k == 1) return diag(0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// CG to `rel_tol`; a stagnating restart is accepted when the residual already meets `required`.
Eigen::VectorXd pcg(const SparseSpd& a, const Eigen::VectorXd& rhs, double rel_tol, double required,
                    CgStats* stats) {
  const Eigen::Index n = a.size();
  if (a.matrix.cols() != n || rhs.size() != n) throw Error("system and right-hand side sizes differ");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (stats) *stats = CgStats{};
  if (rhs_norm == 0.0) return x;

  const Eigen::VectorXd diag = a.matrix.diagonal();
  if ((diag.array() <= 0.0).any()) throw Error("system not PD: non-positive diagonal entry");
  const Eigen::VectorXd inv_diag = diag.cwiseInverse();

  std::vector<double> alphas;
  std::vector<double> betas;
  const long cap = 50 * static_cast<long>(n);
  const double target = rel_tol * rhs_norm;
  long it = 0;
  double res = rhs_norm;

  // The recurrence residual drifts from b - A x; restart from the true residual until
  // the true residual meets the tolerance.
  double last_true = std::numeric_limits<double>::infinity();
  for (bool first = true;; first = false) {
    Eigen::VectorXd r = first ? Eigen::VectorXd(rhs) : Eigen::VectorXd(rhs - a.matrix * x);
    res = r.norm();
    if (res <= target) break;
    // A restart that no longer halves the true residual has hit the rounding floor.
    if (!(res < 0.5 * last_true)) {
      if (res <= required * rhs_norm) break;
      throw Error("system not PD or ill-conditioned: CG stagnated at relative residual " +
                  format_number(res / rhs_norm));
    }
    last_true = res;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    while (res > target) {
      if (it >= cap) throw Error("system not PD or ill-conditioned: CG iteration cap exceeded");
      const Eigen::VectorXd ap = a.matrix * p;
      const double curvature = p.dot(ap);
      if (!(curvature > 0.0)) throw Error("system not PD: non-positive curvature in CG");
      const double alpha = rz / curvature;
      x += alpha * p;
      r -= alpha * ap;
      res = r.norm();
      ++it;
      if (first) alphas.push_back(alpha);
      if (res <= target) break;
      z = inv_diag.cwiseProduct(r);
      const double rz_next = r.dot(z);
      const double beta = rz_next / rz;
      if (first) betas.push_back(beta);
      rz = rz_next;
      p = z + beta * p;
    }
  }
  if (stats) {
    stats->iterations = static_cast<int>(it);
    stats->relative_residual = res / rhs_norm;
    stats->min_ritz = smallest_ritz_value(alphas, betas);
  }
  return x;
}

}  // namespace

Eigen::VectorXd solve_spd(const SparseSpd& a, const Eigen::VectorXd& rhs, double rel_tol,
                          CgStats* stats) {
  return pcg(a, rhs, rel_tol, rel_tol, stats);
}

Eigen::VectorXd solve_spd_to_floor(const SparseSpd& a, const Eigen::VectorXd& rhs, double required_tol,
                                   CgStats* stats) {
  return pcg(a, rhs, 1e-15, required_tol, stats);
}

}  // namespace vbifem
