#include "vbifem/simplex.hpp"

#include <cmath>

#include "vbifem/error.hpp"

namespace vbifem {

ShapeValues shape_functions(ElementKind kind, const Eigen::VectorXd& local) {
  const int dim = dimension_of(kind);
  if (local.size() != dim) throw Error("local coordinate has wrong dimension");
  constexpr double kTol = 1e-12;
  if ((local.array() < -kTol).any() || local.sum() > 1.0 + kTol)
    throw Error("local coordinate outside the reference simplex");

  ShapeValues out;
  out.values.resize(dim + 1);
  out.values(0) = 1.0 - local.sum();
  out.values.tail(dim) = local;
  out.local_grads = Eigen::MatrixXd::Zero(dim + 1, dim);
  out.local_grads.row(0).setConstant(-1.0);
  out.local_grads.bottomRows(dim).setIdentity();
  return out;
}

Jacobian element_jacobian(const Eigen::MatrixXd& node_coords) {
  const Index dim = node_coords.cols();
  if ((dim != 2 && dim != 3) || node_coords.rows() != dim + 1)
    throw Error("element coordinates must describe a TRI3 or TET4");

  Jacobian jac;
  // Columns are the edge vectors from node 0; equals sum_i x_i (dN_i/dxi)^T.
  jac.matrix = (node_coords.bottomRows(dim).rowwise() - node_coords.row(0)).transpose();
  jac.det = jac.matrix.determinant();

  const Eigen::RowVectorXd extent =
      node_coords.colwise().maxCoeff() - node_coords.colwise().minCoeff();
  const double diag = extent.norm();
  if (!(std::abs(jac.det) >= 1e-14 * std::pow(diag, static_cast<double>(dim))) || diag == 0.0)
    throw Error("degenerate element");
  jac.measure = std::abs(jac.det) / (dim == 2 ? 2.0 : 6.0);
  return jac;
}

Eigen::MatrixXd physical_gradients(const Eigen::MatrixXd& node_coords) {
  const Jacobian jac = element_jacobian(node_coords);
  const Index dim = node_coords.cols();
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(dim + 1, dim);
  local.row(0).setConstant(-1.0);
  local.bottomRows(dim).setIdentity();
  // dN/dx = dN/dxi * J^{-1}
  return local * jac.matrix.inverse();
}

}  // namespace vbifem
