#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vbifem {

/// Symmetric positive-definite system matrix in compressed column storage.
struct SparseSpd {
  Eigen::SparseMatrix<double> matrix;

  Eigen::Index size() const { return matrix.rows(); }
};

struct CgStats {
  int iterations = 0;
  double relative_residual = 0.0;
  // Smallest eigenvalue of the Lanczos tridiagonal built from the CG coefficients, an
  // estimate of the smallest eigenvalue of the Jacobi-preconditioned operator.
  double min_ritz = 0.0;
};

/// Jacobi-preconditioned conjugate gradients until |A x - rhs| <= rel_tol |rhs|.
/// Throws vbifem::Error when 50 n iterations are exceeded or a non-positive curvature is met.
Eigen::VectorXd solve_spd(const SparseSpd& a, const Eigen::VectorXd& rhs, double rel_tol = 1e-10,
                          CgStats* stats = nullptr);

/// Iterates until restarts stop reducing the true residual, i.e. to the rounding floor.
/// Throws if that floor is above required_tol |rhs|.
Eigen::VectorXd solve_spd_to_floor(const SparseSpd& a, const Eigen::VectorXd& rhs,
                                   double required_tol = 1e-10, CgStats* stats = nullptr);

}  // namespace vbifem
