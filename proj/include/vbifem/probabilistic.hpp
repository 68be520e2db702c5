#pragma once

#include <Eigen/Dense>

#include "vbifem/elasticity.hpp"
#include "vbifem/mesh.hpp"

namespace vbifem {

/// Posterior P(m, k) that data point k was generated by centroid m (M x K).
/// Every column sums to one.
struct ResponsibilityMatrix {
  Eigen::MatrixXd values;

  Index centroids() const { return values.rows(); }
  Index points() const { return values.cols(); }
};

/// Row-sum lumped nodal volume V_m (area times thickness in 2D).
Eigen::VectorXd lumped_nodal_volume(const Mesh& mesh, double thickness = 1.0);

/// Strain energy density at each node: the measure-weighted mean of the element energy
/// densities over the elements touching the node. Orphan nodes get 0 with a warning.
Eigen::VectorXd nodal_energy_density(const Mesh& mesh, const Eigen::MatrixXd& displacement,
                                     const Material& material);

/// w_m = exp(-beta W_m).
Eigen::VectorXd energy_weights(const Eigen::VectorXd& nodal_energy, double beta);

/// P(m,k) = w_m exp(-|X_m - x_k|^2 / 2s2) / sum_m' (...), evaluated column-wise in log space.
ResponsibilityMatrix responsibilities(const Eigen::MatrixXd& centroids, const PointSet& data,
                                      double sigma2, const Eigen::VectorXd& weights);

/// Same as responsibilities() with the weights given as log w_m (<= 0); avoids underflow
/// when beta W_m is large.
ResponsibilityMatrix responsibilities_log_weights(const Eigen::MatrixXd& centroids,
                                                  const PointSet& data, double sigma2,
                                                  const Eigen::VectorXd& log_weights);

/// pbar_m = sum_k P(m,k); the entries add up to the number of data points.
Eigen::VectorXd equivalent_probability(const ResponsibilityMatrix& p);

/// bbar_m = (1/s2) sum_k P(m,k) (x_k - anchor_m).
///
/// Pass the reference node positions as `anchor` for the total form and the current
/// centroids X + u_n for the incremental form.
Eigen::MatrixXd equivalent_body_force(const ResponsibilityMatrix& p, const Eigen::MatrixXd& anchor,
                                      const PointSet& data, double sigma2);

/// Closed-form minimiser of the mixture objective over the variance:
/// max(sum P |X~_m - x_k|^2 / (D sum P), sigma_floor).
double update_sigma(const ResponsibilityMatrix& p, const Eigen::MatrixXd& centroids,
                    const PointSet& data, double sigma_floor);

/// Default variance floor, 1e-12 times the squared bounding-box diagonal of the data.
double default_sigma_floor(const PointSet& data);

/// Mean squared distance over all centroid/data pairs divided by D.
double initial_sigma2(const Eigen::MatrixXd& centroids, const PointSet& data);

/// Probabilistic elastic potential
///   -sum_k log sum_m w_m N(x_k; X_m + u_m, s2 I) + gamma sum_m 1/2 |u_m|^2 V_m
/// with w_m = exp(-beta W_m(u)) (all ones when `energy_weighting` is false).
double evaluate_potential(const Mesh& mesh, const Eigen::MatrixXd& displacement, const PointSet& data,
                          double sigma2, const Material& material, double beta, double gamma,
                          bool energy_weighting = true);

}  // namespace vbifem
