#include "meshgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "vbifem/error.hpp"

namespace vbifem::meshgen {

namespace {

constexpr double kEps = 1e-9;

std::vector<Facet> element_facets(const Element& el) {
  std::vector<Facet> out;
  const int n = el.size();
  for (int skip = 0; skip < n; ++skip) {
    Facet f;
    for (int a = 0; a < n; ++a)
      if (a != skip) f.push_back(el.nodes[a]);
    out.push_back(f);
  }
  return out;
}

Index grid_node(int i, int j, int k, int nx, int ny) {
  return static_cast<Index>(i + (nx + 1) * (j + (ny + 1) * k));
}

}  // namespace

void tag_boundary(Mesh& mesh, const FacetClassifier& classify) {
  std::map<Facet, std::pair<int, Facet>> seen;  // sorted key -> (count, facet in element order)
  for (const Element& el : mesh.elements) {
    for (Facet f : element_facets(el)) {
      Facet key = f;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = seen.emplace(key, std::make_pair(1, f));
      if (!inserted) ++it->second.first;
    }
  }
  mesh.boundary_groups.clear();
  for (const auto& [key, entry] : seen) {
    if (entry.first != 1) continue;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(mesh.dimension);
    for (Index n : entry.second) c += mesh.coords.row(n).transpose();
    c /= static_cast<double>(entry.second.size());
    const std::string name = classify(c);
    if (!name.empty()) mesh.boundary_groups[name].push_back(entry.second);
  }
}

Mesh rectangle(double width, double height, int nx, int ny) {
  if (nx < 1 || ny < 1 || !(width > 0.0) || !(height > 0.0)) throw Error("bad rectangle size");
  Mesh mesh;
  mesh.dimension = 2;
  mesh.coords.resize((nx + 1) * (ny + 1), 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.coords.row(grid_node(i, j, 0, nx, ny)) << width * i / nx, height * j / ny;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index a = grid_node(i, j, 0, nx, ny), b = grid_node(i + 1, j, 0, nx, ny);
      const Index c = grid_node(i + 1, j + 1, 0, nx, ny), d = grid_node(i, j + 1, 0, nx, ny);
      mesh.elements.push_back({ElementKind::Tri3, {a, b, c, 0}});
      mesh.elements.push_back({ElementKind::Tri3, {a, c, d, 0}});
    }
  }
  mesh.node_ids.resize(static_cast<std::size_t>(mesh.node_count()));
  for (std::size_t i = 0; i < mesh.node_ids.size(); ++i) mesh.node_ids[i] = static_cast<long>(i + 1);
  tag_boundary(mesh, [&](const Eigen::VectorXd& c) -> std::string {
    if (c(1) < kEps) return "bottom";
    if (c(1) > height - kEps) return "top";
    if (c(0) < kEps) return "left";
    if (c(0) > width - kEps) return "right";
    return "";
  });
  orient_elements(mesh);
  mesh.validate();
  return mesh;
}

namespace {

// Six tetrahedra around the cell diagonal 0 -> 7; corners indexed by bits (x, y, z).
constexpr std::array<std::array<int, 4>, 6> kKuhn = {{
    {0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7},
}};

Mesh box_cells(double lx, double ly, double lz, int nx, int ny, int nz,
               const std::function<bool(int, int, int)>& keep) {
  Mesh mesh;
  mesh.dimension = 3;
  mesh.coords.resize((nx + 1) * (ny + 1) * (nz + 1), 3);
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.coords.row(grid_node(i, j, k, nx, ny)) << lx * i / nx, ly * j / ny, lz * k / nz;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!keep(i, j, k)) continue;
        std::array<Index, 8> corner;
        for (int b = 0; b < 8; ++b)
          corner[static_cast<std::size_t>(b)] = grid_node(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1), nx, ny);
        for (const auto& t : kKuhn)
          mesh.elements.push_back({ElementKind::Tet4,
                                   {corner[static_cast<std::size_t>(t[0])], corner[static_cast<std::size_t>(t[1])],
                                    corner[static_cast<std::size_t>(t[2])], corner[static_cast<std::size_t>(t[3])]}});
      }
    }
  }
  mesh.node_ids.resize(static_cast<std::size_t>(mesh.node_count()));
  for (std::size_t i = 0; i < mesh.node_ids.size(); ++i) mesh.node_ids[i] = static_cast<long>(i + 1);
  orient_elements(mesh);
  return mesh;
}

// Drops nodes no element references and renumbers the rest in order.
void compact(Mesh& mesh) {
  const std::vector<bool> orphan = orphan_nodes(mesh);
  std::vector<Index> remap(orphan.size(), -1);
  Index next = 0;
  for (std::size_t i = 0; i < orphan.size(); ++i)
    if (!orphan[i]) remap[i] = next++;
  Eigen::MatrixXd coords(next, mesh.dimension);
  for (std::size_t i = 0; i < orphan.size(); ++i)
    if (remap[i] >= 0) coords.row(remap[i]) = mesh.coords.row(static_cast<Index>(i));
  mesh.coords = coords;
  for (Element& el : mesh.elements)
    for (int a = 0; a < el.size(); ++a) el.nodes[a] = remap[static_cast<std::size_t>(el.nodes[a])];
  mesh.node_ids.resize(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < mesh.node_ids.size(); ++i) mesh.node_ids[i] = static_cast<long>(i + 1);
}

}  // namespace

Mesh box(double lx, double ly, double lz, int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1 || !(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0))
    throw Error("bad box size");
  Mesh mesh = box_cells(lx, ly, lz, nx, ny, nz, [](int, int, int) { return true; });
  tag_boundary(mesh, [&](const Eigen::VectorXd& c) -> std::string {
    if (c(2) < kEps) return "bottom";
    if (c(2) > lz - kEps) return "top";
    if (c(0) < kEps) return "left";
    if (c(0) > lx - kEps) return "right";
    if (c(1) < kEps) return "front";
    if (c(1) > ly - kEps) return "back";
    return "";
  });
  mesh.validate();
  return mesh;
}

Mesh notched_block(const NotchSpec& s) {
  const int slot_end = s.slot_column + s.slot_columns;
  if (s.slot_column < 1 || s.slot_columns < 1 || slot_end >= s.nx || s.slot_depth < 1 || s.slot_depth >= s.nz)
    throw Error("slot must leave material on both sides and below");
  const int first_cut = s.nz - s.slot_depth;
  Mesh mesh = box_cells(s.lx, s.ly, s.lz, s.nx, s.ny, s.nz, [&](int i, int, int k) {
    return !(i >= s.slot_column && i < slot_end && k >= first_cut);
  });
  compact(mesh);
  const double hx = s.lx / s.nx;
  const double slot_lo = hx * s.slot_column, slot_hi = hx * slot_end;
  const double floor_z = s.lz * first_cut / s.nz;
  tag_boundary(mesh, [&](const Eigen::VectorXd& c) -> std::string {
    if (c(2) < kEps) return "bottom";
    if (c(2) > s.lz - kEps) return "top";
    if (c(0) < kEps) return "left";
    if (c(0) > s.lx - kEps) return "right";
    if (c(1) < kEps) return "front";
    if (c(1) > s.ly - kEps) return "back";
    if (std::abs(c(0) - slot_lo) < kEps) return "slot_left";
    if (std::abs(c(0) - slot_hi) < kEps) return "slot_right";
    if (std::abs(c(2) - floor_z) < kEps) return "slot_floor";
    return "";
  });
  mesh.validate();
  return mesh;
}

Mesh plate_with_hole(const PlateSpec& s) {
  if (s.perimeter_points < 8 || s.layers < 1 || !(s.hole_radius > 0.0) ||
      !(2.0 * s.hole_radius < std::min(s.width, s.height)) || !(s.grading > 0.0))
    throw Error("bad plate specification");
  const double w = s.width, h = s.height;
  const double perimeter = 2.0 * (w + h);
  const int n = s.perimeter_points;

  // Outer boundary walked counter-clockwise from the bottom-left corner.
  auto outer = [&](double arc) -> Eigen::Vector2d {
    if (arc <= w) return {-w / 2 + arc, -h / 2};
    arc -= w;
    if (arc <= h) return {w / 2, -h / 2 + arc};
    arc -= h;
    if (arc <= w) return {w / 2 - arc, h / 2};
    arc -= w;
    return {-w / 2, h / 2 - arc};
  };

  Mesh mesh;
  mesh.dimension = 2;
  const int rings = s.layers + 1;
  mesh.coords.resize(n * rings, 2);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = outer(perimeter * i / n);
    const Eigen::Vector2d q = s.hole_radius * p.normalized();
    for (int l = 0; l < rings; ++l) {
      const double t = std::pow(static_cast<double>(l) / s.layers, s.grading);
      mesh.coords.row(l * n + i) = (q + t * (p - q)).transpose();
    }
  }
  for (int l = 0; l < s.layers; ++l) {
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const Index a = l * n + i, b = l * n + ip, c = (l + 1) * n + ip, d = (l + 1) * n + i;
      // Alternate the diagonal so the pattern does not drift around the hole.
      if ((i + l) % 2 == 0) {
        mesh.elements.push_back({ElementKind::Tri3, {a, b, c, 0}});
        mesh.elements.push_back({ElementKind::Tri3, {a, c, d, 0}});
      } else {
        mesh.elements.push_back({ElementKind::Tri3, {a, b, d, 0}});
        mesh.elements.push_back({ElementKind::Tri3, {b, c, d, 0}});
      }
    }
  }
  mesh.node_ids.resize(static_cast<std::size_t>(mesh.node_count()));
  for (std::size_t i = 0; i < mesh.node_ids.size(); ++i) mesh.node_ids[i] = static_cast<long>(i + 1);
  orient_elements(mesh);
  tag_boundary(mesh, [&](const Eigen::VectorXd& c) -> std::string {
    if (c(1) < -h / 2 + kEps) return "bottom";
    if (c(1) > h / 2 - kEps) return "top";
    if (c(0) < -w / 2 + kEps) return "left";
    if (c(0) > w / 2 - kEps) return "right";
    if (c.norm() < s.hole_radius + kEps) return "hole";
    return "";
  });
  mesh.validate();
  return mesh;
}

}  // namespace vbifem::meshgen
