#include "vbifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "vbifem/error.hpp"
#include "vbifem/simplex.hpp"

namespace vbifem {

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

Eigen::MatrixXd Mesh::element_coords(Index e) const {
  const Element& el = elements.at(static_cast<std::size_t>(e));
  Eigen::MatrixXd out(el.size(), dimension);
  for (int a = 0; a < el.size(); ++a) out.row(a) = coords.row(el.nodes[a]);
  return out;
}

namespace {

std::vector<Facet> element_faces(const Element& el) {
  const auto& n = el.nodes;
  if (el.kind == ElementKind::Tri3) return {{n[0], n[1]}, {n[1], n[2]}, {n[2], n[0]}};
  return {{n[0], n[1], n[2]}, {n[0], n[1], n[3]}, {n[0], n[2], n[3]}, {n[1], n[2], n[3]}};
}

Facet sorted(Facet f) {
  std::sort(f.begin(), f.end());
  return f;
}

}  // namespace

void Mesh::validate() const {
  if (dimension != 2 && dimension != 3) throw Error("mesh dimension must be 2 or 3");
  if (coords.cols() != dimension) throw Error("node coordinates do not match mesh dimension");
  if (!coords.allFinite()) throw Error("non-finite node coordinate");
  if (static_cast<Index>(node_ids.size()) != node_count())
    throw Error("node id table does not match node count");
  if (elements.empty()) throw Error("mesh has no elements");

  std::map<Facet, int> face_use;
  for (Index e = 0; e < element_count(); ++e) {
    const Element& el = elements[static_cast<std::size_t>(e)];
    if (dimension_of(el.kind) != dimension) {
      std::ostringstream msg;
      msg << "element " << e << " kind does not match mesh dimension " << dimension;
      throw Error(msg.str());
    }
    std::set<Index> distinct;
    for (int a = 0; a < el.size(); ++a) {
      if (el.nodes[a] < 0 || el.nodes[a] >= node_count())
        throw Error("element " + std::to_string(e) + " references an invalid node");
      distinct.insert(el.nodes[a]);
    }
    if (static_cast<int>(distinct.size()) != el.size())
      throw Error("element " + std::to_string(e) + " repeats a node");
    if (element_jacobian(element_coords(e)).det <= 0.0)
      throw Error("element " + std::to_string(e) + " is not positively oriented");
    for (const Facet& f : element_faces(el)) ++face_use[sorted(f)];
  }

  const std::size_t facet_size = dimension == 2 ? 2 : 3;
  for (const auto& [name, facets] : boundary_groups) {
    for (const Facet& f : facets) {
      if (f.size() != facet_size)
        throw Error("boundary group '" + name + "' has a facet of wrong size");
      auto it = face_use.find(sorted(f));
      if (it == face_use.end() || it->second != 1)
        throw Error("boundary group '" + name + "' has a facet that is not a boundary face");
    }
  }
}

double bbox_diagonal(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) throw Error("bounding box of an empty point set");
  const Eigen::RowVectorXd extent = points.colwise().maxCoeff() - points.colwise().minCoeff();
  return extent.norm();
}

std::size_t orient_elements(Mesh& mesh) {
  std::size_t flipped = 0;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    if (element_jacobian(mesh.element_coords(e)).det < 0.0) {
      Element& el = mesh.elements[static_cast<std::size_t>(e)];
      std::swap(el.nodes[el.size() - 2], el.nodes[el.size() - 1]);
      ++flipped;
    }
  }
  return flipped;
}

std::vector<bool> orphan_nodes(const Mesh& mesh) {
  std::vector<bool> orphan(static_cast<std::size_t>(mesh.node_count()), true);
  for (const Element& el : mesh.elements)
    for (int a = 0; a < el.size(); ++a) orphan[static_cast<std::size_t>(el.nodes[a])] = false;
  return orphan;
}

Mesh displaced(const Mesh& mesh, const Eigen::MatrixXd& displacement) {
  if (displacement.rows() != mesh.node_count() || displacement.cols() != mesh.dimension)
    throw Error("displacement field does not match the mesh");
  Mesh out = mesh;
  out.coords += displacement;
  return out;
}

}  // namespace vbifem
