#include "vbifem/forward.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "vbifem/error.hpp"
#include "vbifem/probabilistic.hpp"
#include "vbifem/simplex.hpp"
#include "vbifem/sparse.hpp"

namespace vbifem {

namespace {

double facet_measure(const Mesh& mesh, const Facet& f) {
  if (f.size() == 2) return (mesh.coords.row(f[1]) - mesh.coords.row(f[0])).norm();
  const Eigen::Vector3d a = mesh.coords.row(f[1]) - mesh.coords.row(f[0]);
  const Eigen::Vector3d b = mesh.coords.row(f[2]) - mesh.coords.row(f[0]);
  return 0.5 * a.cross(b).norm();
}

void check_components(const ComponentValues& values, int dim, const std::string& what) {
  if (static_cast<int>(values.size()) != dim)
    throw Error(what + " must prescribe " + std::to_string(dim) + " components");
}

}  // namespace

void BoundaryConditions::validate(const Mesh& mesh) const {
  const int dim = mesh.dimension;
  for (const auto& [group, values] : dirichlet) {
    if (!mesh.boundary_groups.count(group)) throw Error("unknown boundary group '" + group + "'");
    check_components(values, dim, "dirichlet group '" + group + "'");
    if (tractions.count(group))
      throw Error("group '" + group + "' is both a Dirichlet and a traction boundary");
  }
  for (const auto& [id, values] : node_dirichlet) {
    check_components(values, dim, "dirichlet node " + std::to_string(id));
    if (std::find(mesh.node_ids.begin(), mesh.node_ids.end(), id) == mesh.node_ids.end())
      throw Error("unknown node id " + std::to_string(id));
  }
  for (const auto& [group, t] : tractions) {
    if (!mesh.boundary_groups.count(group)) throw Error("unknown boundary group '" + group + "'");
    if (t.size() != dim) throw Error("traction on '" + group + "' has wrong dimension");
  }
  if (body_force.size() != 0 && body_force.size() != dim)
    throw Error("body force has wrong dimension");
}

Eigen::VectorXd assemble_traction(const Mesh& mesh, const std::string& group,
                                  const Eigen::VectorXd& traction, double thickness) {
  auto it = mesh.boundary_groups.find(group);
  if (it == mesh.boundary_groups.end()) throw Error("unknown boundary group '" + group + "'");
  if (traction.size() != mesh.dimension) throw Error("traction has wrong dimension");
  const int dim = mesh.dimension;
  const double t = dim == 2 ? thickness : 1.0;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.node_count() * dim);
  for (const Facet& facet : it->second) {
    const double share = facet_measure(mesh, facet) * t / static_cast<double>(facet.size());
    for (Index n : facet) f.segment(n * dim, dim) += share * traction;
  }
  return f;
}

Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const Material& material) {
  const int dim = mesh.dimension;
  const Eigen::MatrixXd moduli = moduli_matrix(material);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const Eigen::MatrixXd ke = element_stiffness(mesh.element_coords(e), moduli, 1.0, material.thickness);
    for (int a = 0; a < el.size(); ++a)
      for (int i = 0; i < dim; ++i)
        for (int b = 0; b < el.size(); ++b)
          for (int j = 0; j < dim; ++j)
            triplets.emplace_back(el.nodes[a] * dim + i, el.nodes[b] * dim + j, ke(a * dim + i, b * dim + j));
  }
  const Index n = mesh.node_count() * dim;
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

ForwardSolution forward_solve(const Mesh& mesh, const Material& material,
                              const BoundaryConditions& bcs) {
  material.validate();
  if (material.dimension() != mesh.dimension) throw Error("analysis mode does not match mesh dimension");
  bcs.validate(mesh);
  const int dim = mesh.dimension;
  const Index n = mesh.node_count() * dim;

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (const auto& [group, t] : bcs.tractions) f += assemble_traction(mesh, group, t, material.thickness);
  if (bcs.body_force.size() == dim) {
    const Eigen::VectorXd v = lumped_nodal_volume(mesh, dim == 2 ? material.thickness : 1.0);
    for (Index m = 0; m < mesh.node_count(); ++m) f.segment(m * dim, dim) += v(m) * bcs.body_force;
  }

  // Constrained dofs; later entries override earlier ones for the same dof.
  std::vector<std::optional<double>> fixed(static_cast<std::size_t>(n));
  auto constrain = [&](Index node, const ComponentValues& values) {
    for (int c = 0; c < dim; ++c)
      if (values[static_cast<std::size_t>(c)]) fixed[static_cast<std::size_t>(node * dim + c)] = values[static_cast<std::size_t>(c)];
  };
  for (const auto& [group, values] : bcs.dirichlet) {
    std::set<Index> nodes;
    for (const Facet& facet : mesh.boundary_groups.at(group)) nodes.insert(facet.begin(), facet.end());
    for (Index node : nodes) constrain(node, values);
  }
  std::unordered_map<long, Index> index_of;
  for (std::size_t i = 0; i < mesh.node_ids.size(); ++i) index_of[mesh.node_ids[i]] = static_cast<Index>(i);
  for (const auto& [id, values] : bcs.node_dirichlet) constrain(index_of.at(id), values);

  Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(n);
  bool any_fixed = false;
  for (Index i = 0; i < n; ++i)
    if (fixed[static_cast<std::size_t>(i)]) {
      prescribed(i) = *fixed[static_cast<std::size_t>(i)];
      any_fixed = true;
    }
  if (!any_fixed) throw Error("singular system: no Dirichlet constraints");

  const Eigen::SparseMatrix<double> k = assemble_stiffness(mesh, material);
  Eigen::VectorXd rhs = f - k * prescribed;
  std::vector<Eigen::Triplet<double>> reduced;
  for (Index col = 0; col < k.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it)
      if (!fixed[static_cast<std::size_t>(it.row())] && !fixed[static_cast<std::size_t>(it.col())])
        reduced.emplace_back(it.row(), it.col(), it.value());
  for (Index i = 0; i < n; ++i)
    if (fixed[static_cast<std::size_t>(i)]) {
      reduced.emplace_back(i, i, 1.0);
      rhs(i) = prescribed(i);
    }
  SparseSpd sys;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(reduced.begin(), reduced.end());

  Eigen::VectorXd u;
  try {
    u = solve_spd_to_floor(sys, rhs, 1e-10);
  } catch (const Error& e) {
    throw Error(std::string("singular system (insufficient constraints?): ") + e.what());
  }

  ForwardSolution sol;
  sol.displacement = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      u.data(), mesh.node_count(), dim);
  sol.load = f;
  sol.reactions = k * u - f;
  for (Index i = 0; i < n; ++i)
    if (!fixed[static_cast<std::size_t>(i)]) sol.reactions(i) = 0.0;
  return sol;
}

DeformedConfiguration deform_mesh(const Mesh& mesh, const Eigen::MatrixXd& displacement) {
  DeformedConfiguration out;
  out.mesh = displaced(mesh, displacement);
  out.points.dimension = mesh.dimension;
  out.points.points = out.mesh.coords;
  for (Index e = 0; e < out.mesh.element_count(); ++e) {
    const Eigen::MatrixXd xe = out.mesh.element_coords(e);
    const Eigen::MatrixXd edges = (xe.bottomRows(xe.cols()).rowwise() - xe.row(0)).transpose();
    if (!(edges.determinant() > 0.0)) ++out.inverted_elements;
  }
  if (out.inverted_elements > 0)
    warn(std::to_string(out.inverted_elements) + " elements are inverted in the deformed configuration");
  return out;
}

}  // namespace vbifem
