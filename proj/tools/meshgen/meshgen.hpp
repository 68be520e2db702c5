#pragma once

#include <functional>
#include <string>

#include "vbifem/mesh.hpp"

namespace vbifem::meshgen {

/// Names the boundary group of a facet from its centroid; an empty name leaves it ungrouped.
using FacetClassifier = std::function<std::string(const Eigen::VectorXd& centroid)>;

/// Collects facets that belong to exactly one element and files them by `classify`.
void tag_boundary(Mesh& mesh, const FacetClassifier& classify);

/// [0,w] x [0,h] split into nx*ny cells of two triangles. Groups: bottom, top, left, right.
Mesh rectangle(double width, double height, int nx, int ny);

/// [0,lx] x [0,ly] x [0,lz] split into cells of six tetrahedra.
/// Groups: left, right (x), front, back (y), bottom, top (z).
Mesh box(double lx, double ly, double lz, int nx, int ny, int nz);

struct PlateSpec {
  double width = 1.0;
  double height = 2.0;
  double hole_radius = 0.25;
  int perimeter_points = 60;  // equally spaced along the outer boundary, corners included
  int layers = 6;             // radial layers between hole and outer boundary
  double grading = 1.4;       // > 1 clusters layers toward the hole
};

/// Rectangle centred at the origin with a central circular hole.
/// Groups: bottom, top, left, right, hole.
Mesh plate_with_hole(const PlateSpec& spec = {});

struct NotchSpec {
  double lx = 2.0, ly = 1.0, lz = 1.0;
  int nx = 11, ny = 5, nz = 5;
  int slot_column = 5;   // first cell column removed in x
  int slot_columns = 1;  // slot width in cells
  int slot_depth = 3;    // number of cell layers removed from the top
};

/// Box with a through slot cut from the top face at mid length.
/// Groups: bottom, top, left, right, front, back, slot_left, slot_right, slot_floor.
Mesh notched_block(const NotchSpec& spec = {});

}  // namespace vbifem::meshgen
