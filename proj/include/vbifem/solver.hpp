#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vbifem/elasticity.hpp"
#include "vbifem/mesh.hpp"
#include "vbifem/probabilistic.hpp"
#include "vbifem/sparse.hpp"

namespace vbifem {

/// Total: the FE-step solves for u_{n+1} with the load measured from the reference nodes.
/// Incremental: it solves for the increment with the load measured from X + u_n.
enum class UpdateForm { Total, Incremental };

/// Which configuration the moving mesh represents. The iteration itself is identical; the
/// tag tells consumers whether the recovered field is psi or psi^{-1}.
enum class Direction { ReferenceToCurrent, CurrentToReference };

struct Hyperparams {
  double beta = 1e-5;    // weight of the elastic prior
  double gamma = 1e-7;   // weight of the 1/2 |u|^2 regulariser
  int max_iter = 200;
  double tol = 1e-4;     // increment threshold, relative to the moving mesh bbox diagonal
  double sigma_floor = 0.0;  // <= 0 selects default_sigma_floor(data)
  UpdateForm update_form = UpdateForm::Total;
  bool energy_weighting = true;
  Direction direction = Direction::ReferenceToCurrent;

  void validate() const;
};

/// K~ = beta Kbar + gamma M_L + (1/s2) Mbar_L.
///
/// `pbar` is the responsibility mass per node (equivalent_probability). The FE integrals see
/// it as a density over the reference domain, pbar_m / V_m: element weights of Kbar are the
/// mean nodal density and Mbar is lumped by vertex quadrature, so its diagonal equals pbar.
SparseSpd assemble_system(const Mesh& mesh, const Material& material, const Eigen::VectorXd& pbar,
                          double sigma2, const Hyperparams& hyper);

/// Lumped load: entry (m, j) of the node-major vector is bbar(m, j) * V_m.
Eigen::VectorXd assemble_load(const Eigen::MatrixXd& bbar, const Mesh& mesh, double thickness = 1.0);

/// Everything the FE-step needs from the previous iterate.
struct RecoveryState {
  int iteration = 0;
  Eigen::MatrixXd displacement;  // u_n, nodes x D
  double sigma2 = 0.0;
  ResponsibilityMatrix responsibilities;
  Eigen::VectorXd pbar;
  Eigen::MatrixXd bbar;  // count form, anchored per the update form
};

/// Evaluates responsibilities, pbar and bbar at (u_n, s2_n).
RecoveryState posterior_state(const Mesh& mesh, const PointSet& data, const Material& material,
                              const Hyperparams& hyper, const Eigen::MatrixXd& displacement,
                              double sigma2);

/// Solves K~_n u_{n+1} = b_n and returns u_{n+1} (total displacement in both forms).
Eigen::MatrixXd fe_step(const RecoveryState& state, const Mesh& mesh, const PointSet& data,
                        const Material& material, const Hyperparams& hyper,
                        CgStats* stats = nullptr);

/// Variance update for the new centroids with the responsibilities of the previous iterate.
double bl_step(const ResponsibilityMatrix& p, const Eigen::MatrixXd& new_centroids,
               const PointSet& data, double sigma_floor);

struct IterationRecord {
  int iteration = 0;
  double sigma2 = 0.0;
  double potential = 0.0;
  double increment = 0.0;
  int cg_iterations = 0;
  double min_ritz = 0.0;
};

struct RecoveryResult {
  Eigen::MatrixXd displacement;
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;
  double initial_sigma2 = 0.0;
  double initial_potential = 0.0;
  double sigma_floor = 0.0;
  Direction direction = Direction::ReferenceToCurrent;

  /// Final positions of the moving nodes, X + u.
  Eigen::MatrixXd mapped_positions(const Mesh& moving) const { return moving.coords + displacement; }
};

/// FE-BL staggered recovery: responsibilities, FE-step, BL-step, convergence test,
/// until |u_{n+1} - u_n| <= tol * bbox_diagonal(mesh) or max_iter.
RecoveryResult recover(const Mesh& moving, const PointSet& target, const Material& material,
                       const Hyperparams& hyper);

}  // namespace vbifem
