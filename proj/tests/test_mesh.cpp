#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace vbifem;

namespace {

const char* kTriangle = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
3
1 0 0 0
2 1 0 0
3 0 1 0
$EndNodes
$Elements
1
1 2 2 0 1 1 2 3
$EndElements
)";

Mesh parse(const std::string& text) {
  std::istringstream in(text);
  return parse_msh(in);
}

// Minimal legacy VTK reader for the POINTS block.
Eigen::MatrixXd vtk_points(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  while (in >> word && word != "POINTS") {
  }
  Index n = 0;
  std::string type;
  in >> n >> type;
  Eigen::MatrixXd pts(n, 3);
  for (Index i = 0; i < n; ++i) in >> pts(i, 0) >> pts(i, 1) >> pts(i, 2);
  return pts;
}

}  // namespace

TEST_CASE("smallest valid mesh") {
  const Mesh m = parse(kTriangle);
  CHECK(m.dimension == 2);
  CHECK(m.node_count() == 3);
  CHECK(m.element_count() == 1);
  CHECK(m.elements[0].kind == ElementKind::Tri3);
  CHECK(m.node_ids == std::vector<long>{1, 2, 3});
}

TEST_CASE("header counts are enforced") {
  std::string text = kTriangle;
  text.replace(text.find("$Nodes\n3"), 8, "$Nodes\n4");
  CHECK_THROWS_WITH_AS(parse(text), doctest::Contains("node count mismatch"), Error);

  text = kTriangle;
  text.replace(text.find("$Elements\n1"), 11, "$Elements\n2");
  CHECK_THROWS_WITH_AS(parse(text), doctest::Contains("element count mismatch"), Error);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_WITH_AS(parse("$Nodes\n0\n$EndNodes\n"), doctest::Contains("malformed section delimiters"), Error);

  std::string undefined = kTriangle;
  undefined.replace(undefined.find("1 2 3\n$EndElements"), 5, "1 2 9");
  CHECK_THROWS_WITH_AS(parse(undefined), doctest::Contains("undefined node"), Error);

  std::string lines_only = kTriangle;
  lines_only.replace(lines_only.find("1 2 2 0 1 1 2 3"), 15, "1 1 2 0 1 1 2");
  CHECK_THROWS_WITH_AS(parse(lines_only), doctest::Contains("no TRI3 or TET4"), Error);

  std::string lifted = kTriangle;
  lifted.replace(lifted.find("3 0 1 0"), 7, "3 0 1 5");
  CHECK_THROWS_WITH_AS(parse(lifted), doctest::Contains("nonzero z"), Error);

  std::string collinear = kTriangle;
  collinear.replace(collinear.find("3 0 1 0"), 7, "3 2 0 0");
  CHECK_THROWS_AS(parse(collinear), Error);
}

TEST_CASE("boundary groups, skipped types and orientation") {
  const std::string text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
1
1 7 "base"
$EndPhysicalNames
$Nodes
4
10 0 0 0
20 1 0 0
30 1 1 0
40 0 1 0
$EndNodes
$Elements
5
1 15 2 0 1 10
2 1 2 7 1 10 20
3 3 2 0 1 10 20 30 40
4 2 2 0 1 10 30 20
5 2 2 0 1 10 30 40
$EndElements
)";
  const Mesh m = parse(text);
  CHECK(m.element_count() == 2);
  CHECK(m.skipped_elements == 1);
  REQUIRE(m.boundary_groups.count("base") == 1);
  CHECK(m.boundary_groups.at("base").size() == 1);
  for (Index e = 0; e < m.element_count(); ++e) CHECK(element_jacobian(m.element_coords(e)).det > 0.0);
  // Node ids map to distinct rows.
  CHECK(m.node_ids == std::vector<long>{10, 20, 30, 40});
}

TEST_CASE("generated meshes survive a write/parse round trip with their counts") {
  for (const Mesh& generated :
       {meshgen::plate_with_hole(), meshgen::notched_block(), meshgen::rectangle(2.0, 1.0, 3, 2)}) {
    std::stringstream buf;
    write_msh(buf, generated);
    const Mesh back = parse_msh(buf);
    CHECK(back.node_count() == generated.node_count());
    CHECK(back.element_count() == generated.element_count());
    CHECK(back.dimension == generated.dimension);
    CHECK((back.coords - generated.coords).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.boundary_groups.size() == generated.boundary_groups.size());
    for (const auto& [name, facets] : generated.boundary_groups) {
      REQUIRE(back.boundary_groups.count(name) == 1);
      CHECK(back.boundary_groups.at(name).size() == facets.size());
    }
  }
}

TEST_CASE("plate generator matches its specification") {
  const meshgen::PlateSpec spec;
  const Mesh m = meshgen::plate_with_hole(spec);
  CHECK(m.element_count() == 2 * spec.perimeter_points * spec.layers);
  CHECK(m.element_count() >= 300);
  CHECK(m.element_count() <= 800);
  double area = 0.0;
  for (Index e = 0; e < m.element_count(); ++e) area += element_jacobian(m.element_coords(e)).measure;
  // Polygonal hole slightly smaller in area than the circle.
  const double exact = spec.width * spec.height - 3.141592653589793 * spec.hole_radius * spec.hole_radius;
  CHECK(area == doctest::Approx(exact).epsilon(0.01));
  for (const char* g : {"top", "bottom", "left", "right", "hole"}) CHECK(m.boundary_groups.count(g) == 1);
}

TEST_CASE("point cloud parsing") {
  std::istringstream a("0 0\n1 0\n");
  CHECK(parse_point_cloud(a, 2).size() == 2);

  std::istringstream b("# hdr\n1 2 3\n");
  const PointSet p = parse_point_cloud(b, 3);
  REQUIRE(p.size() == 1);
  CHECK(p.points(0, 2) == 3.0);

  std::istringstream c("1 2\n");
  CHECK_THROWS_WITH_AS(parse_point_cloud(c, 3), doctest::Contains("column count"), Error);

  std::istringstream d("# only a comment\n");
  CHECK_THROWS_AS(parse_point_cloud(d, 2), Error);

  std::istringstream e("1 2 3\n4 5 6\n");
  CHECK(parse_point_cloud(e).dimension == 3);

  std::stringstream out;
  Eigen::MatrixXd pts(2, 2);
  pts << 0.1, -2.5, 1e-20, 3.0;
  write_point_cloud(out, pts);
  CHECK(parse_point_cloud(out, 2).points == pts);
}

TEST_CASE("VTK output") {
  const Mesh tri = parse(kTriangle);
  std::ostringstream os;
  write_vtk(os, tri, {{"displacement", Eigen::MatrixXd::Zero(3, 2)}});
  const std::string text = os.str();
  CHECK(text.find("# vtk DataFile Version 3.0") == 0);
  CHECK(text.find("CELL_TYPES 1\n5\n") != std::string::npos);
  CHECK(text.find("VECTORS displacement double\n0 0 0\n0 0 0\n0 0 0\n") != std::string::npos);

  const Mesh tet = meshgen::box(1, 1, 1, 1, 1, 1);
  std::ostringstream os3;
  write_vtk(os3, tet);
  CHECK(os3.str().find("\n10\n") != std::string::npos);

  std::ostringstream bad;
  CHECK_THROWS_AS(write_vtk(bad, tri, {{"x", Eigen::MatrixXd::Zero(2, 1)}}), Error);

  const Mesh plate = meshgen::plate_with_hole();
  std::ostringstream rt;
  write_vtk(rt, plate);
  const Eigen::MatrixXd pts = vtk_points(rt.str());
  CHECK(pts.col(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(oracle::relative_difference(pts.leftCols(2), plate.coords) <= 1e-12);
}

TEST_CASE("shape functions") {
  const ShapeValues c = shape_functions(ElementKind::Tri3, Eigen::Vector2d(1.0 / 3, 1.0 / 3));
  CHECK(c.values.isApprox(Eigen::Vector3d::Constant(1.0 / 3)));
  Eigen::Matrix<double, 3, 2> grads;
  grads << -1, -1, 1, 0, 0, 1;
  CHECK(c.local_grads == grads);

  const ShapeValues v = shape_functions(ElementKind::Tet4, Eigen::Vector3d::Zero());
  CHECK(v.values == Eigen::Vector4d(1, 0, 0, 0));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.33);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d local(u(rng), u(rng), u(rng));
    CHECK(std::abs(shape_functions(ElementKind::Tet4, local).values.sum() - 1.0) <= 1e-14);
  }
  CHECK_THROWS_AS(shape_functions(ElementKind::Tri3, Eigen::Vector2d(0.7, 0.7)), Error);
}

TEST_CASE("element jacobian") {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  const Jacobian j = element_jacobian(tri);
  CHECK(j.matrix.isApprox(Eigen::Matrix2d::Identity()));
  CHECK(j.measure == doctest::Approx(0.5));

  const Jacobian j2 = element_jacobian(2.0 * tri);
  CHECK(j2.det == doctest::Approx(4.0));
  CHECK(j2.measure == doctest::Approx(2.0));

  Eigen::MatrixXd line(3, 2);
  line << 0, 0, 1, 0, 2, 0;
  CHECK_THROWS_WITH_AS(element_jacobian(line), doctest::Contains("degenerate"), Error);

  Eigen::MatrixXd tet(4, 3);
  tet << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK(element_jacobian(tet).measure == doctest::Approx(1.0 / 6));
}

TEST_CASE("bounding box diagonal") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 0, 3, 4;
  CHECK(bbox_diagonal(a) == doctest::Approx(5.0));
  CHECK(bbox_diagonal(Eigen::MatrixXd::Ones(1, 2)) == 0.0);
  Eigen::MatrixXd b(2, 3);
  b << 0, 0, 0, 1, 1, 1;
  CHECK(bbox_diagonal(b) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(bbox_diagonal(Eigen::MatrixXd(0, 2)), Error);
}
