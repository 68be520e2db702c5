#include "vbifem/probabilistic.hpp"

#include <cmath>
#include <numbers>

#include "vbifem/error.hpp"
#include "vbifem/simplex.hpp"

namespace vbifem {

namespace {

void check_data(const Eigen::MatrixXd& centroids, const PointSet& data) {
  if (centroids.rows() == 0 || data.size() == 0) throw Error("empty centroid or data set");
  if (centroids.cols() != data.points.cols()) throw Error("centroid and data dimensions differ");
}

// Squared distances between every centroid (rows) and data point (columns).
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& points) {
  Eigen::MatrixXd d2(centroids.rows(), points.rows());
  for (Index k = 0; k < points.rows(); ++k)
    d2.col(k) = (centroids.rowwise() - points.row(k)).rowwise().squaredNorm();
  return d2;
}

Eigen::VectorXd element_energy_densities(const Mesh& mesh, const Eigen::MatrixXd& displacement,
                                         const Material& material, Eigen::VectorXd& measures) {
  measures.resize(mesh.element_count());
  Eigen::VectorXd w(mesh.element_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const Eigen::MatrixXd xe = mesh.element_coords(e);
    Eigen::VectorXd de(el.size() * mesh.dimension);
    for (int a = 0; a < el.size(); ++a)
      de.segment(a * mesh.dimension, mesh.dimension) = displacement.row(el.nodes[a]).transpose();
    measures(e) = element_jacobian(xe).measure;
    w(e) = strain_energy_density(strain_displacement(xe) * de, material);
  }
  return w;
}

}  // namespace

Eigen::VectorXd lumped_nodal_volume(const Mesh& mesh, double thickness) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const Eigen::VectorXd me = element_mass(mesh.element_coords(e), MassWeighting::Unit, thickness);
    for (int a = 0; a < el.size(); ++a) v(el.nodes[a]) += me(a);
  }
  return v;
}

Eigen::VectorXd nodal_energy_density(const Mesh& mesh, const Eigen::MatrixXd& displacement,
                                     const Material& material) {
  if (displacement.rows() != mesh.node_count() || displacement.cols() != mesh.dimension)
    throw Error("displacement field does not match the mesh");
  Eigen::VectorXd measures;
  const Eigen::VectorXd we = element_energy_densities(mesh, displacement, material, measures);

  Eigen::VectorXd num = Eigen::VectorXd::Zero(mesh.node_count());
  Eigen::VectorXd den = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int a = 0; a < el.size(); ++a) {
      num(el.nodes[a]) += measures(e) * we(e);
      den(el.nodes[a]) += measures(e);
    }
  }
  Eigen::VectorXd w(mesh.node_count());
  Index orphans = 0;
  for (Index m = 0; m < mesh.node_count(); ++m) {
    if (den(m) > 0.0) {
      w(m) = num(m) / den(m);
    } else {
      w(m) = 0.0;
      ++orphans;
    }
  }
  if (orphans > 0) warn(std::to_string(orphans) + " orphan nodes get zero strain energy");
  return w;
}

Eigen::VectorXd energy_weights(const Eigen::VectorXd& nodal_energy, double beta) {
  return (-beta * nodal_energy.array()).exp().matrix();
}

ResponsibilityMatrix responsibilities(const Eigen::MatrixXd& centroids, const PointSet& data,
                                      double sigma2, const Eigen::VectorXd& weights) {
  check_data(centroids, data);
  if (!(sigma2 > 0.0)) throw Error("variance must be positive");
  if (weights.size() != centroids.rows()) throw Error("one energy weight per centroid required");
  if ((weights.array() <= 0.0).any() || (weights.array() > 1.0).any())
    throw Error("energy weights must lie in (0, 1]");
  return responsibilities_log_weights(centroids, data, sigma2, weights.array().log().matrix());
}

ResponsibilityMatrix responsibilities_log_weights(const Eigen::MatrixXd& centroids,
                                                  const PointSet& data, double sigma2,
                                                  const Eigen::VectorXd& log_w) {
  check_data(centroids, data);
  if (!(sigma2 > 0.0)) throw Error("variance must be positive");
  if (log_w.size() != centroids.rows()) throw Error("one energy weight per centroid required");
  ResponsibilityMatrix p;
  p.values = -squared_distances(centroids, data.points) / (2.0 * sigma2);
  p.values.colwise() += log_w;
  for (Index k = 0; k < p.values.cols(); ++k) {
    auto col = p.values.col(k);
    const double top = col.maxCoeff();
    col = (col.array() - top).exp().matrix();
    col /= col.sum();
  }
  return p;
}

Eigen::VectorXd equivalent_probability(const ResponsibilityMatrix& p) {
  return p.values.rowwise().sum();
}

Eigen::MatrixXd equivalent_body_force(const ResponsibilityMatrix& p, const Eigen::MatrixXd& anchor,
                                      const PointSet& data, double sigma2) {
  check_data(anchor, data);
  if (p.centroids() != anchor.rows() || p.points() != data.size())
    throw Error("responsibility matrix does not match centroids and data");
  const Eigen::VectorXd pbar = equivalent_probability(p);
  Eigen::MatrixXd b = p.values * data.points;
  b -= pbar.asDiagonal() * anchor;
  return b / sigma2;
}

double update_sigma(const ResponsibilityMatrix& p, const Eigen::MatrixXd& centroids,
                    const PointSet& data, double sigma_floor) {
  check_data(centroids, data);
  if (p.centroids() != centroids.rows() || p.points() != data.size())
    throw Error("responsibility matrix does not match centroids and data");
  const double weighted = p.values.cwiseProduct(squared_distances(centroids, data.points)).sum();
  const double mass = p.values.sum();
  const double s2 = weighted / (static_cast<double>(data.points.cols()) * mass);
  return std::max(s2, sigma_floor);
}

double default_sigma_floor(const PointSet& data) {
  const double diag = bbox_diagonal(data.points);
  const double floor = 1e-12 * diag * diag;
  return floor > 0.0 ? floor : 1e-300;
}

double initial_sigma2(const Eigen::MatrixXd& centroids, const PointSet& data) {
  check_data(centroids, data);
  const double total = squared_distances(centroids, data.points).sum();
  return total / (static_cast<double>(centroids.cols() * centroids.rows() * data.size()));
}

double evaluate_potential(const Mesh& mesh, const Eigen::MatrixXd& displacement, const PointSet& data,
                          double sigma2, const Material& material, double beta, double gamma,
                          bool energy_weighting) {
  const Eigen::MatrixXd centroids = mesh.coords + displacement;
  check_data(centroids, data);
  Eigen::VectorXd log_w = Eigen::VectorXd::Zero(mesh.node_count());
  if (energy_weighting && beta != 0.0)
    log_w = -beta * nodal_energy_density(mesh, displacement, material);

  const double dim = static_cast<double>(mesh.dimension);
  const double log_norm = 0.5 * dim * std::log(2.0 * std::numbers::pi * sigma2);
  const Eigen::MatrixXd d2 = squared_distances(centroids, data.points);
  double neg_log_lik = 0.0;
  for (Index k = 0; k < d2.cols(); ++k) {
    const Eigen::ArrayXd terms = log_w.array() - d2.col(k).array() / (2.0 * sigma2);
    const double top = terms.maxCoeff();
    neg_log_lik -= top + std::log((terms - top).exp().sum()) - log_norm;
  }
  const Eigen::VectorXd v = lumped_nodal_volume(mesh, material.thickness);
  const double reg = 0.5 * gamma * v.dot(displacement.rowwise().squaredNorm());
  return neg_log_lik + reg;
}

}  // namespace vbifem
