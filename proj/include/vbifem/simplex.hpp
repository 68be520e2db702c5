#pragma once

#include <Eigen/Dense>

#include "vbifem/mesh.hpp"

namespace vbifem {

struct ShapeValues {
  Eigen::VectorXd values;       // N_i, one per node
  Eigen::MatrixXd local_grads;  // dN_i/dxi_j, nodes x D
};

/// Linear simplex shape functions on the reference element with vertices at the
/// origin and the unit points. `local` has D components.
ShapeValues shape_functions(ElementKind kind, const Eigen::VectorXd& local);

struct Jacobian {
  Eigen::MatrixXd matrix;  // dx_a / dxi_b
  double det = 0.0;
  double measure = 0.0;  // area (TRI3) or volume (TET4)
};

/// Isoparametric map of a linear simplex given its node coordinates (nodes x D).
/// Throws on degenerate elements.
Jacobian element_jacobian(const Eigen::MatrixXd& node_coords);

/// Physical shape-function gradients dN_i/dx (nodes x D); constant per element.
Eigen::MatrixXd physical_gradients(const Eigen::MatrixXd& node_coords);

}  // namespace vbifem
