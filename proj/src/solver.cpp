#include "vbifem/solver.hpp"

#include <cmath>

#include "vbifem/error.hpp"

namespace vbifem {

namespace {

void check_inputs(const Mesh& mesh, const PointSet& data, const Material& material) {
  if (mesh.node_count() == 0 || data.size() == 0) throw Error("empty mesh or point set");
  if (data.points.cols() != mesh.dimension) throw Error("mesh and point set dimensions differ");
  if (material.dimension() != mesh.dimension) throw Error("analysis mode does not match mesh dimension");
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& field) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = field;
  return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Index dim) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), v.size() / dim, dim);
}

}  // namespace

void Hyperparams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("beta must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error("gamma must be finite and > 0");
  if (max_iter < 0) throw Error("max_iter must be non-negative");
  if (!(tol > 0.0)) throw Error("tol must be positive");
}

SparseSpd assemble_system(const Mesh& mesh, const Material& material, const Eigen::VectorXd& pbar,
                          double sigma2, const Hyperparams& hyper) {
  if (pbar.size() != mesh.node_count()) throw Error("pbar must have one entry per node");
  if ((pbar.array() < 0.0).any()) throw Error("pbar must be non-negative");
  if (!(sigma2 > 0.0)) throw Error("variance must be positive");

  const int dim = mesh.dimension;
  const double t = material.thickness;
  const Eigen::MatrixXd moduli = moduli_matrix(material);
  const Eigen::VectorXd volume = lumped_nodal_volume(mesh, t);
  Eigen::VectorXd density = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index m = 0; m < mesh.node_count(); ++m)
    if (volume(m) > 0.0) density(m) = pbar(m) / volume(m);

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const Eigen::MatrixXd xe = mesh.element_coords(e);
    Eigen::VectorXd de(el.size());
    for (int a = 0; a < el.size(); ++a) de(a) = density(el.nodes[a]);

    if (hyper.beta > 0.0) {
      const Eigen::MatrixXd ke = hyper.beta * element_stiffness(xe, moduli, de.mean(), t);
      for (int a = 0; a < el.size(); ++a)
        for (int i = 0; i < dim; ++i)
          for (int b = 0; b < el.size(); ++b)
            for (int j = 0; j < dim; ++j) {
              const double v = ke(a * dim + i, b * dim + j);
              if (v != 0.0) triplets.emplace_back(el.nodes[a] * dim + i, el.nodes[b] * dim + j, v);
            }
    }
    const Eigen::VectorXd me = element_mass(xe, MassWeighting::Unit, t);
    const Eigen::VectorXd mbar = element_mass(xe, MassWeighting::NodalField, t, de);
    for (int a = 0; a < el.size(); ++a) diag(el.nodes[a]) += hyper.gamma * me(a) + mbar(a) / sigma2;
  }
  const std::vector<bool> orphan = orphan_nodes(mesh);
  for (Index m = 0; m < mesh.node_count(); ++m) {
    if (orphan[static_cast<std::size_t>(m)]) diag(m) += pbar(m) / sigma2;
    for (int i = 0; i < dim; ++i) triplets.emplace_back(m * dim + i, m * dim + i, diag(m));
  }

  SparseSpd sys;
  const Index n = mesh.node_count() * dim;
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

Eigen::VectorXd assemble_load(const Eigen::MatrixXd& bbar, const Mesh& mesh, double thickness) {
  if (bbar.rows() != mesh.node_count() || bbar.cols() != mesh.dimension)
    throw Error("body force field does not match the mesh");
  const Eigen::VectorXd volume = lumped_nodal_volume(mesh, thickness);
  return flatten(volume.asDiagonal() * bbar);
}

RecoveryState posterior_state(const Mesh& mesh, const PointSet& data, const Material& material,
                              const Hyperparams& hyper, const Eigen::MatrixXd& displacement,
                              double sigma2) {
  RecoveryState state;
  state.displacement = displacement;
  state.sigma2 = sigma2;
  const Eigen::MatrixXd centroids = mesh.coords + displacement;
  Eigen::VectorXd log_w = Eigen::VectorXd::Zero(mesh.node_count());
  if (hyper.energy_weighting && hyper.beta > 0.0)
    log_w = -hyper.beta * nodal_energy_density(mesh, displacement, material);
  state.responsibilities = responsibilities_log_weights(centroids, data, sigma2, log_w);
  state.pbar = equivalent_probability(state.responsibilities);
  const Eigen::MatrixXd& anchor = hyper.update_form == UpdateForm::Total ? mesh.coords : centroids;
  state.bbar = equivalent_body_force(state.responsibilities, anchor, data, sigma2);
  return state;
}

Eigen::MatrixXd fe_step(const RecoveryState& state, const Mesh& mesh, const PointSet& data,
                        const Material& material, const Hyperparams& hyper, CgStats* stats) {
  check_inputs(mesh, data, material);
  const SparseSpd sys = assemble_system(mesh, material, state.pbar, state.sigma2, hyper);

  // The FE load integrates the body-force density bbar / V; lumping returns bbar itself,
  // which also covers orphan nodes (V = 0).
  const Eigen::VectorXd rhs = flatten(state.bbar);
  const Eigen::MatrixXd solution = unflatten(solve_spd(sys, rhs, 1e-10, stats), mesh.dimension);
  if (hyper.update_form == UpdateForm::Total) return solution;
  return state.displacement + solution;
}

double bl_step(const ResponsibilityMatrix& p, const Eigen::MatrixXd& new_centroids,
               const PointSet& data, double sigma_floor) {
  return update_sigma(p, new_centroids, data, sigma_floor);
}

RecoveryResult recover(const Mesh& moving, const PointSet& target, const Material& material,
                       const Hyperparams& hyper) {
  check_inputs(moving, target, material);
  hyper.validate();
  material.validate();

  RecoveryResult result;
  result.direction = hyper.direction;
  result.sigma_floor = hyper.sigma_floor > 0.0 ? hyper.sigma_floor : default_sigma_floor(target);
  result.displacement = Eigen::MatrixXd::Zero(moving.node_count(), moving.dimension);
  result.initial_sigma2 = std::max(initial_sigma2(moving.coords, target), result.sigma_floor);
  result.initial_potential =
      evaluate_potential(moving, result.displacement, target, result.initial_sigma2, material,
                         hyper.beta, hyper.gamma, hyper.energy_weighting);

  const double stop = hyper.tol * bbox_diagonal(moving.coords);
  double sigma2 = result.initial_sigma2;
  for (int n = 0; n < hyper.max_iter; ++n) {
    const RecoveryState state =
        posterior_state(moving, target, material, hyper, result.displacement, sigma2);
    CgStats cg;
    const Eigen::MatrixXd next = fe_step(state, moving, target, material, hyper, &cg);
    sigma2 = bl_step(state.responsibilities, moving.coords + next, target, result.sigma_floor);

    IterationRecord rec;
    rec.iteration = n + 1;
    rec.sigma2 = sigma2;
    rec.increment = (next - result.displacement).norm();
    rec.cg_iterations = cg.iterations;
    rec.min_ritz = cg.min_ritz;
    rec.potential = evaluate_potential(moving, next, target, sigma2, material, hyper.beta,
                                       hyper.gamma, hyper.energy_weighting);
    result.history.push_back(rec);
    result.displacement = next;
    result.iterations = n + 1;
    if (rec.increment <= stop) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace vbifem
