#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "meshgen.hpp"
#include "vbifem/error.hpp"
#include "vbifem/mesh_io.hpp"

using namespace vbifem;

int main(int argc, char** argv) {
  CLI::App app{"Structured test meshes written as Gmsh 2.2 ASCII"};
  app.require_subcommand(1);
  std::string out;

  meshgen::PlateSpec plate;
  auto* plate_cmd = app.add_subcommand("plate", "rectangular plate with a central hole");
  plate_cmd->add_option("--out", out, "output .msh")->required();
  plate_cmd->add_option("--width", plate.width);
  plate_cmd->add_option("--height", plate.height);
  plate_cmd->add_option("--radius", plate.hole_radius);
  plate_cmd->add_option("--perimeter", plate.perimeter_points, "points on the outer boundary");
  plate_cmd->add_option("--layers", plate.layers);
  plate_cmd->add_option("--grading", plate.grading);

  meshgen::NotchSpec notch;
  auto* notch_cmd = app.add_subcommand("notched-block", "box with a slot cut from the top");
  notch_cmd->add_option("--out", out, "output .msh")->required();
  notch_cmd->add_option("--lx", notch.lx);
  notch_cmd->add_option("--ly", notch.ly);
  notch_cmd->add_option("--lz", notch.lz);
  notch_cmd->add_option("--nx", notch.nx);
  notch_cmd->add_option("--ny", notch.ny);
  notch_cmd->add_option("--nz", notch.nz);
  notch_cmd->add_option("--slot-column", notch.slot_column);
  notch_cmd->add_option("--slot-columns", notch.slot_columns);
  notch_cmd->add_option("--slot-depth", notch.slot_depth);

  double width = 1.0, height = 1.0, depth = 1.0;
  int nx = 4, ny = 4, nz = 4;
  auto* rect_cmd = app.add_subcommand("rectangle", "triangulated rectangle");
  rect_cmd->add_option("--out", out, "output .msh")->required();
  rect_cmd->add_option("--width", width);
  rect_cmd->add_option("--height", height);
  rect_cmd->add_option("--nx", nx);
  rect_cmd->add_option("--ny", ny);

  auto* box_cmd = app.add_subcommand("box", "tetrahedralized box");
  box_cmd->add_option("--out", out, "output .msh")->required();
  box_cmd->add_option("--lx", width);
  box_cmd->add_option("--ly", height);
  box_cmd->add_option("--lz", depth);
  box_cmd->add_option("--nx", nx);
  box_cmd->add_option("--ny", ny);
  box_cmd->add_option("--nz", nz);

  CLI11_PARSE(app, argc, argv);

  try {
    Mesh mesh;
    if (*plate_cmd)
      mesh = meshgen::plate_with_hole(plate);
    else if (*notch_cmd)
      mesh = meshgen::notched_block(notch);
    else if (*rect_cmd)
      mesh = meshgen::rectangle(width, height, nx, ny);
    else
      mesh = meshgen::box(width, height, depth, nx, ny, nz);
    std::ofstream os(out);
    if (!os) throw Error("cannot write " + out);
    write_msh(os, mesh);
    std::cout << out << ": " << mesh.node_count() << " nodes, " << mesh.element_count()
              << " elements\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
