#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vbifem/elasticity.hpp"
#include "vbifem/mesh.hpp"

namespace vbifem {

/// Prescribed value per displacement component; std::nullopt leaves the component free.
using ComponentValues = std::vector<std::optional<double>>;

struct BoundaryConditions {
  std::map<std::string, ComponentValues> dirichlet;    // boundary group -> u-bar
  std::map<long, ComponentValues> node_dirichlet;      // file node id -> u-bar
  std::map<std::string, Eigen::VectorXd> tractions;    // boundary group -> t-bar per unit area
  Eigen::VectorXd body_force;                          // rho b per unit volume; empty means zero

  /// Checks group existence, component counts and that no group is both Dirichlet and traction.
  void validate(const Mesh& mesh) const;
};

/// Consistent nodal loads of a constant traction on a boundary group.
Eigen::VectorXd assemble_traction(const Mesh& mesh, const std::string& group,
                                  const Eigen::VectorXd& traction, double thickness = 1.0);

/// Unweighted global stiffness sum_e thickness * measure * B^T D B.
Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const Material& material);

struct ForwardSolution {
  Eigen::MatrixXd displacement;  // nodes x D
  Eigen::VectorXd load;          // applied nodal loads, node-major
  Eigen::VectorXd reactions;     // K u - f, zero away from constrained dofs
};

/// Linear elastic boundary value problem; Dirichlet values are imposed by symmetric elimination.
ForwardSolution forward_solve(const Mesh& mesh, const Material& material,
                              const BoundaryConditions& bcs);

struct DeformedConfiguration {
  Mesh mesh;
  PointSet points;
  std::size_t inverted_elements = 0;
};

/// x = X + u, returned both as a mesh with unchanged connectivity and as a point set.
DeformedConfiguration deform_mesh(const Mesh& mesh, const Eigen::MatrixXd& displacement);

}  // namespace vbifem
