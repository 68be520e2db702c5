#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vbifem {

using Index = Eigen::Index;

enum class ElementKind { Tri3, Tet4 };

/// Number of nodes of a linear simplex of the given kind.
constexpr int node_count(ElementKind kind) { return kind == ElementKind::Tri3 ? 3 : 4; }

/// Spatial dimension a simplex kind lives in.
constexpr int dimension_of(ElementKind kind) { return kind == ElementKind::Tri3 ? 2 : 3; }

struct Element {
  ElementKind kind = ElementKind::Tri3;
  // Zero-based node indices; only the first node_count(kind) entries are used.
  std::array<Index, 4> nodes{-1, -1, -1, -1};

  int size() const { return node_count(kind); }
};

/// A boundary facet: an edge (2 nodes) in 2D, a triangle (3 nodes) in 3D.
using Facet = std::vector<Index>;

/// Linear simplex mesh. Nodes are stored as rows of `coords` (N x D).
struct Mesh {
  int dimension = 2;
  Eigen::MatrixXd coords;
  // Identifier each node carried in its source file; index i <-> node_ids[i].
  std::vector<long> node_ids;
  std::vector<Element> elements;
  std::map<std::string, std::vector<Facet>> boundary_groups;
  // Elements of unsupported MSH types that were ignored while reading.
  std::size_t skipped_elements = 0;

  Index node_count() const { return coords.rows(); }
  Index element_count() const { return static_cast<Index>(elements.size()); }

  /// Node coordinates of element e as an (nodes x D) matrix.
  Eigen::MatrixXd element_coords(Index e) const;

  /// Throws vbifem::Error if any structural invariant is violated.
  void validate() const;
};

/// Target data points, one per row (K x D).
struct PointSet {
  int dimension = 2;
  Eigen::MatrixXd points;

  Index size() const { return points.rows(); }
};

/// Euclidean length of the axis-aligned bounding-box diagonal of the rows of `points`.
double bbox_diagonal(const Eigen::MatrixXd& points);

/// Reorders element nodes so every element has a positive Jacobian determinant.
/// Returns the number of elements that were flipped.
std::size_t orient_elements(Mesh& mesh);

/// Per-node flag: true when no element references the node.
std::vector<bool> orphan_nodes(const Mesh& mesh);

/// Copy of `mesh` with every node moved by the matching row of `displacement`.
Mesh displaced(const Mesh& mesh, const Eigen::MatrixXd& displacement);

}  // namespace vbifem
