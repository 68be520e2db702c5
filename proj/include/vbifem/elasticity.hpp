#pragma once

#include <Eigen/Dense>

namespace vbifem {

enum class AnalysisMode { PlaneStress, PlaneStrain, Solid3D };

/// Isotropic linear-elastic model solid described by its Lame constants.
struct Material {
  double lambda = 1.0;
  double mu = 1.0;
  AnalysisMode mode = AnalysisMode::PlaneStress;
  // Out-of-plane thickness for 2D integrals; must be 1 in 3D.
  double thickness = 1.0;

  int dimension() const { return mode == AnalysisMode::Solid3D ? 3 : 2; }
  void validate() const;
};

/// Voigt-packed moduli: 3x3 in 2D (xx, yy, xy), 6x6 in 3D (xx, yy, zz, yz, xz, xy),
/// engineering shear strains. Plane stress uses lambda* = 2 lambda mu / (lambda + 2 mu).
Eigen::MatrixXd moduli_matrix(const Material& material);

Eigen::VectorXd stress(const Eigen::VectorXd& strain, const Material& material);

/// W = 1/2 eps^T D eps.
double strain_energy_density(const Eigen::VectorXd& strain, const Material& material);

/// Constant strain-displacement matrix of a TRI3 (3x6) or TET4 (6x12); dofs are node-major.
Eigen::MatrixXd strain_displacement(const Eigen::MatrixXd& node_coords);

/// weight * thickness * measure * B^T D B. The integrand is constant over a linear simplex,
/// so this is exact.
Eigen::MatrixXd element_stiffness(const Eigen::MatrixXd& node_coords, const Eigen::MatrixXd& moduli,
                                  double weight, double thickness = 1.0);

enum class MassWeighting {
  Unit,        // integral of N^T N
  Field,       // integral of p N^T N with p interpolated linearly, row-sum lumped
  NodalField,  // integral of p N^T N under vertex quadrature (node i gets measure p_i / n)
};

/// Lumped element mass: one entry per node, shared by every displacement component.
/// `nodal_weight` holds the per-node field value for the Field and NodalField modes.
Eigen::VectorXd element_mass(const Eigen::MatrixXd& node_coords, MassWeighting weighting,
                             double thickness = 1.0,
                             const Eigen::VectorXd& nodal_weight = Eigen::VectorXd());

}  // namespace vbifem
