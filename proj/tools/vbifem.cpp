#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "vbifem/vbifem.hpp"

using namespace vbifem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

// Point clouds may also be given as meshes; their nodes are the points. dimension 0 accepts any.
PointSet load_points(const std::string& path, int dimension) {
  if (std::filesystem::path(path).extension() == ".msh") {
    const Mesh mesh = read_msh(path);
    if (dimension != 0 && mesh.dimension != dimension) throw Error(path + ": dimension does not match the mesh");
    return PointSet{mesh.dimension, mesh.coords};
  }
  return read_point_cloud(path, dimension);
}

RunConfig load_config(const std::string& path, int dimension) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_run_config(empty, dimension);
  }
  return read_run_config(path, dimension);
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  if (path.empty()) return;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  writer(os);
  if (!os) throw Error("failed writing " + path);
}

struct RunArgs {
  std::string mesh, data, config, out, log, truth, positions;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mesh", mesh, "moving mesh (.msh)")->required();
    cmd->add_option("--data", data, "target points (point cloud or .msh)")->required();
    cmd->add_option("--config", config, "key = value settings");
    cmd->add_option("--out", out, "VTK output on the moving mesh");
    cmd->add_option("--log", log, "convergence CSV");
    cmd->add_option("--truth", truth, "true mapped positions of the moving nodes");
    cmd->add_option("--positions", positions, "write mapped node positions as a point cloud");
  }
};

// Writes outputs shared by recover and baseline-cpd and prints the error summary.
void finish_run(const RunArgs& args, const Mesh& mesh, const Eigen::MatrixXd& displacement) {
  const Eigen::MatrixXd mapped = mesh.coords + displacement;
  PointFields fields{{"displacement", displacement}};
  if (!args.truth.empty()) {
    const PointSet truth = load_points(args.truth, mesh.dimension);
    const ErrorReport report = average_nodal_error(mapped, truth.points, mesh.coords);
    fields["error"] = report.per_node;
    std::cout << "mean_abs_error " << report.mean_abs_error << '\n'
              << "relative_percent " << report.relative_percent << '\n';
  }
  write_file(args.out, [&](std::ostream& os) { write_vtk(os, mesh, fields); });
  write_file(args.positions, [&](std::ostream& os) { write_point_cloud(os, mapped); });
}

int cmd_recover(const RunArgs& args) {
  const Mesh mesh = read_msh(args.mesh);
  const PointSet data = load_points(args.data, mesh.dimension);
  const RunConfig cfg = load_config(args.config, mesh.dimension);
  const RecoveryResult result = recover(mesh, data, cfg.material, cfg.hyper);

  std::cout << "iterations " << result.iterations << '\n'
            << "converged " << (result.converged ? "yes" : "no") << '\n';
  if (!result.history.empty())
    std::cout << "sigma2 " << result.history.back().sigma2 << '\n'
              << "potential " << result.history.back().potential << '\n';
  finish_run(args, mesh, result.displacement);
  write_file(args.log, [&](std::ostream& os) { os << convergence_log(result); });
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_baseline_cpd(const RunArgs& args) {
  const Mesh mesh = read_msh(args.mesh);
  const PointSet data = load_points(args.data, mesh.dimension);
  const RunConfig cfg = load_config(args.config, mesh.dimension);
  const CpdResult result = cpd_register(PointSet{mesh.dimension, mesh.coords}, data, cfg.cpd);

  std::cout << "iterations " << result.iterations << '\n'
            << "converged " << (result.converged ? "yes" : "no") << '\n';
  finish_run(args, mesh, result.displacement);
  write_file(args.log, [&](std::ostream& os) {
    os << "iter,sigma2\n";
    for (std::size_t i = 0; i < result.sigma2_history.size(); ++i) {
      std::ostringstream row;
      row.precision(17);
      row << i + 1 << ',' << result.sigma2_history[i] << '\n';
      os << row.str();
    }
  });
  return result.converged ? kExitOk : kExitNotConverged;
}

struct ForwardArgs {
  std::string mesh, bc, config, out_mesh, out_cloud, out_truth;
};

int cmd_forward(const ForwardArgs& args) {
  const Mesh mesh = read_msh(args.mesh);
  const RunConfig cfg = load_config(args.config, mesh.dimension);
  const BoundaryConditions bcs = read_boundary_conditions(args.bc, mesh.dimension);
  const ForwardSolution sol = forward_solve(mesh, cfg.material, bcs);
  const DeformedConfiguration deformed = deform_mesh(mesh, sol.displacement);

  std::cout << "nodes " << mesh.node_count() << '\n'
            << "max_displacement " << sol.displacement.rowwise().norm().maxCoeff() << '\n'
            << "inverted_elements " << deformed.inverted_elements << '\n';
  write_file(args.out_mesh, [&](std::ostream& os) { write_msh(os, deformed.mesh); });
  write_file(args.out_cloud, [&](std::ostream& os) { write_point_cloud(os, deformed.points.points); });
  write_file(args.out_truth, [&](std::ostream& os) {
    write_vtk(os, mesh, {{"displacement", sol.displacement}});
  });
  return kExitOk;
}

struct CompareArgs {
  std::string recovered, truth, reference;
};

int cmd_compare(const CompareArgs& args) {
  const PointSet recovered = load_points(args.recovered, 0);
  const PointSet truth = load_points(args.truth, recovered.dimension);
  Eigen::MatrixXd start;
  if (!args.reference.empty()) start = load_points(args.reference, recovered.dimension).points;
  const ErrorReport report = average_nodal_error(recovered.points, truth.points, start);
  std::cout << "nodes " << report.count << '\n' << "mean_abs_error " << report.mean_abs_error << '\n';
  if (!args.reference.empty()) std::cout << "relative_percent " << report.relative_percent << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse deformation recovery with an elastic prior"};
  app.require_subcommand(1);

  RunArgs recover_args;
  auto* recover_cmd = app.add_subcommand("recover", "recover the deformation mapping mesh -> data");
  recover_args.attach(recover_cmd);

  RunArgs cpd_args;
  auto* cpd_cmd = app.add_subcommand("baseline-cpd", "coherent point drift on the mesh nodes");
  cpd_args.attach(cpd_cmd);

  ForwardArgs fwd;
  auto* fwd_cmd = app.add_subcommand("forward", "solve a linear elastic problem for truth data");
  fwd_cmd->add_option("--mesh", fwd.mesh, "reference mesh (.msh)")->required();
  fwd_cmd->add_option("--bc", fwd.bc, "boundary conditions")->required();
  fwd_cmd->add_option("--config", fwd.config, "material settings");
  fwd_cmd->add_option("--out-mesh", fwd.out_mesh, "deformed mesh (.msh)");
  fwd_cmd->add_option("--out-cloud", fwd.out_cloud, "deformed node positions");
  fwd_cmd->add_option("--out-truth", fwd.out_truth, "VTK with the displacement field");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "average nodal error between two position sets");
  cmp_cmd->add_option("--recovered", cmp.recovered)->required();
  cmp_cmd->add_option("--truth", cmp.truth)->required();
  cmp_cmd->add_option("--reference", cmp.reference, "start positions, enables the relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (*recover_cmd) return cmd_recover(recover_args);
    if (*cpd_cmd) return cmd_baseline_cpd(cpd_args);
    if (*fwd_cmd) return cmd_forward(fwd);
    return cmd_compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
