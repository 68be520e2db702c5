#include "vbifem/elasticity.hpp"

#include <cmath>

#include "vbifem/error.hpp"
#include "vbifem/simplex.hpp"

namespace vbifem {

void Material::validate() const {
  if (!(std::isfinite(lambda) && lambda > 0.0)) throw Error("lambda must be finite and positive");
  if (!(std::isfinite(mu) && mu > 0.0)) throw Error("mu must be finite and positive");
  if (!(std::isfinite(thickness) && thickness > 0.0)) throw Error("thickness must be positive");
  if (mode == AnalysisMode::Solid3D && thickness != 1.0) throw Error("thickness must be 1 in 3D");
}

Eigen::MatrixXd moduli_matrix(const Material& m) {
  if (m.mode == AnalysisMode::Solid3D) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(6, 6);
    d.topLeftCorner(3, 3).setConstant(m.lambda);
    d.topLeftCorner(3, 3).diagonal().array() += 2.0 * m.mu;
    d.bottomRightCorner(3, 3).diagonal().setConstant(m.mu);
    return d;
  }
  const double lam =
      m.mode == AnalysisMode::PlaneStress ? 2.0 * m.lambda * m.mu / (m.lambda + 2.0 * m.mu) : m.lambda;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = d(1, 1) = lam + 2.0 * m.mu;
  d(0, 1) = d(1, 0) = lam;
  d(2, 2) = m.mu;
  return d;
}

Eigen::VectorXd stress(const Eigen::VectorXd& strain, const Material& material) {
  const Eigen::MatrixXd d = moduli_matrix(material);
  if (strain.size() != d.rows()) throw Error("strain length does not match analysis mode");
  return d * strain;
}

double strain_energy_density(const Eigen::VectorXd& strain, const Material& material) {
  return 0.5 * strain.dot(stress(strain, material));
}

Eigen::MatrixXd strain_displacement(const Eigen::MatrixXd& node_coords) {
  const Eigen::MatrixXd g = physical_gradients(node_coords);
  const Index n = g.rows();
  const Index dim = g.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim == 2 ? 3 : 6, n * dim);
  for (Index a = 0; a < n; ++a) {
    const Index c = a * dim;
    if (dim == 2) {
      b(0, c) = g(a, 0);
      b(1, c + 1) = g(a, 1);
      b(2, c) = g(a, 1);
      b(2, c + 1) = g(a, 0);
    } else {
      b(0, c) = g(a, 0);
      b(1, c + 1) = g(a, 1);
      b(2, c + 2) = g(a, 2);
      b(3, c + 1) = g(a, 2);
      b(3, c + 2) = g(a, 1);
      b(4, c) = g(a, 2);
      b(4, c + 2) = g(a, 0);
      b(5, c) = g(a, 1);
      b(5, c + 1) = g(a, 0);
    }
  }
  return b;
}

Eigen::MatrixXd element_stiffness(const Eigen::MatrixXd& node_coords, const Eigen::MatrixXd& moduli,
                                  double weight, double thickness) {
  if (weight < 0.0) throw Error("element stiffness weight must be non-negative");
  const double measure = element_jacobian(node_coords).measure;
  const Eigen::MatrixXd b = strain_displacement(node_coords);
  if (moduli.rows() != b.rows()) throw Error("moduli matrix does not match element dimension");
  Eigen::MatrixXd k = (weight * thickness * measure) * (b.transpose() * moduli * b);
  return 0.5 * (k + k.transpose());
}

Eigen::VectorXd element_mass(const Eigen::MatrixXd& node_coords, MassWeighting weighting,
                             double thickness, const Eigen::VectorXd& nodal_weight) {
  const double measure = element_jacobian(node_coords).measure * thickness;
  const Index n = node_coords.rows();
  if (weighting == MassWeighting::Unit)
    return Eigen::VectorXd::Constant(n, measure / static_cast<double>(n));

  if (nodal_weight.size() != n) throw Error("nodal weight field must have one value per node");
  if ((nodal_weight.array() < 0.0).any()) throw Error("nodal weight field must be non-negative");
  if (weighting == MassWeighting::NodalField)
    return nodal_weight * (measure / static_cast<double>(n));

  // Exact simplex integral: int N_i N_j = measure (1 + delta_ij) / (n (n + 1)).
  const double denom = static_cast<double>(n * (n + 1));
  const double total = nodal_weight.sum();
  return ((nodal_weight.array() + total) * (measure / denom)).matrix();
}

}  // namespace vbifem
