#pragma once

// Test oracles. Everything here is computed from first principles (affine fits, dense sums,
// finite differences) and deliberately avoids the library's B matrices and assembly code.

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "meshgen.hpp"
#include "vbifem/vbifem.hpp"

namespace oracle {

using vbifem::Index;
using vbifem::Material;
using vbifem::Mesh;

inline double factorial(int d) { return d == 2 ? 2.0 : 6.0; }

inline double simplex_measure(const Eigen::MatrixXd& xe) {
  const int d = static_cast<int>(xe.cols());
  Eigen::MatrixXd edges(d, d);
  for (int a = 1; a <= d; ++a) edges.row(a - 1) = xe.row(a) - xe.row(0);
  return std::abs(edges.determinant()) / factorial(d);
}

// Displacement gradient G(i, j) = du_j / dX_i of the affine interpolant.
inline Eigen::MatrixXd affine_gradient(const Eigen::MatrixXd& xe, const Eigen::MatrixXd& ue) {
  const int d = static_cast<int>(xe.cols());
  Eigen::MatrixXd edges(d, d), jumps(d, d);
  for (int a = 1; a <= d; ++a) {
    edges.row(a - 1) = xe.row(a) - xe.row(0);
    jumps.row(a - 1) = ue.row(a) - ue.row(0);
  }
  return edges.fullPivLu().solve(jumps);
}

inline double energy_density(const Eigen::MatrixXd& grad, const Material& m) {
  const Eigen::MatrixXd eps = 0.5 * (grad + grad.transpose());
  double lam = m.lambda;
  if (m.mode == vbifem::AnalysisMode::PlaneStress) lam = 2.0 * m.lambda * m.mu / (m.lambda + 2.0 * m.mu);
  const double tr = eps.trace();
  return 0.5 * lam * tr * tr + m.mu * (eps.array() * eps.array()).sum();
}

inline double element_energy(const Eigen::MatrixXd& xe, const Eigen::MatrixXd& ue, const Material& m) {
  return simplex_measure(xe) * m.thickness * energy_density(affine_gradient(xe, ue), m);
}

inline Eigen::MatrixXd rows(const Eigen::VectorXd& flat, Index dim) {
  Eigen::MatrixXd out(flat.size() / dim, dim);
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < dim; ++j) out(i, j) = flat(i * dim + j);
  return out;
}

inline Eigen::VectorXd flat(const Eigen::MatrixXd& m) {
  Eigen::VectorXd out(m.size());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
  return out;
}

inline Eigen::MatrixXd gather(const Mesh& mesh, Index e, const Eigen::MatrixXd& field) {
  const auto& el = mesh.elements[static_cast<std::size_t>(e)];
  Eigen::MatrixXd out(el.size(), field.cols());
  for (int a = 0; a < el.size(); ++a) out.row(a) = field.row(el.nodes[a]);
  return out;
}

inline Eigen::VectorXd nodal_volume(const Mesh& mesh, double thickness) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    const double share = simplex_measure(mesh.element_coords(e)) * thickness / el.size();
    for (int a = 0; a < el.size(); ++a) v(el.nodes[a]) += share;
  }
  return v;
}

inline Eigen::VectorXd nodal_energy(const Mesh& mesh, const Eigen::MatrixXd& u, const Material& m) {
  Eigen::VectorXd num = Eigen::VectorXd::Zero(mesh.node_count());
  Eigen::VectorXd den = Eigen::VectorXd::Zero(mesh.node_count());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const Eigen::MatrixXd xe = mesh.element_coords(e);
    const double meas = simplex_measure(xe);
    const double w = energy_density(affine_gradient(xe, gather(mesh, e, u)), m);
    const auto& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int a = 0; a < el.size(); ++a) {
      num(el.nodes[a]) += meas * w;
      den(el.nodes[a]) += meas;
    }
  }
  for (Index i = 0; i < num.size(); ++i) num(i) = den(i) > 0 ? num(i) / den(i) : 0.0;
  return num;
}

// Discrete objective with responsibilities and variance frozen.
struct Objective {
  const Mesh& mesh;
  const Material& material;
  Eigen::MatrixXd data;  // K x D
  Eigen::MatrixXd p;     // M x K
  double sigma2;
  double beta;
  double gamma;

  double operator()(const Eigen::MatrixXd& u) const {
    const Index dim = mesh.dimension;
    const Eigen::VectorXd vol = nodal_volume(mesh, material.thickness);
    const Eigen::VectorXd pbar = p.rowwise().sum();
    double q = 0.0;
    for (Index m = 0; m < p.rows(); ++m)
      for (Index k = 0; k < p.cols(); ++k)
        q += p(m, k) * (mesh.coords.row(m) + u.row(m) - data.row(k)).squaredNorm() / (2.0 * sigma2);
    q += 0.5 * static_cast<double>(dim) * pbar.sum() * std::log(sigma2);
    for (Index e = 0; e < mesh.element_count(); ++e) {
      const auto& el = mesh.elements[static_cast<std::size_t>(e)];
      double density = 0.0;
      for (int a = 0; a < el.size(); ++a) density += pbar(el.nodes[a]) / vol(el.nodes[a]);
      density /= el.size();
      q += beta * density * element_energy(mesh.element_coords(e), gather(mesh, e, u), material);
    }
    for (Index m = 0; m < u.rows(); ++m) q += 0.5 * gamma * vol(m) * u.row(m).squaredNorm();
    return q;
  }
};

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

// Exact for quadratics: central differences of a quadratic form have no truncation error.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h) {
  const Index n = x.size();
  Eigen::MatrixXd hess(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      auto at = [&](double si, double sj) {
        Eigen::VectorXd y = x;
        y(i) += si * h;
        y(j) += sj * h;
        return f(y);
      };
      hess(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
    }
  return hess;
}

inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Small structured mesh with interior nodes jittered by up to 20% of the cell size.
inline Mesh jittered_mesh(int dim, std::mt19937& rng) {
  Mesh mesh = dim == 2 ? vbifem::meshgen::rectangle(1.0, 1.0, 3, 3) : vbifem::meshgen::box(1.0, 1.0, 1.0, 2, 2, 2);
  const double cell = dim == 2 ? 1.0 / 3.0 : 0.5;
  std::uniform_real_distribution<double> jitter(-0.2 * cell, 0.2 * cell);
  for (Index n = 0; n < mesh.node_count(); ++n) {
    bool interior = true;
    for (int j = 0; j < dim; ++j)
      if (mesh.coords(n, j) < 1e-9 || mesh.coords(n, j) > 1.0 - 1e-9) interior = false;
    if (interior)
      for (int j = 0; j < dim; ++j) mesh.coords(n, j) += jitter(rng);
  }
  mesh.validate();
  return mesh;
}

inline Eigen::MatrixXd random_matrix(Index r, Index c, std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

// Column-stochastic matrix with strictly positive entries.
inline Eigen::MatrixXd random_responsibilities(Index m, Index k, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd p(m, k);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < k; ++j) p(i, j) = u(rng);
  for (Index j = 0; j < k; ++j) p.col(j) /= p.col(j).sum();
  return p;
}

// A random frozen-posterior FE-step: P, sigma2 and beta drawn at random on a jittered mesh.
struct FrozenStep {
  Mesh mesh;
  Material material;
  vbifem::Hyperparams hyper;
  vbifem::PointSet data;
  vbifem::RecoveryState state;
};

inline FrozenStep random_frozen_step(int dim, std::mt19937& rng) {
  FrozenStep s{jittered_mesh(dim, rng), {}, {}, {}, {}};
  s.material = {0.58, 0.38, dim == 2 ? vbifem::AnalysisMode::PlaneStress : vbifem::AnalysisMode::Solid3D};
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  s.hyper.beta = std::pow(10.0, -2.0 + 2.0 * u01(rng));
  s.hyper.gamma = std::pow(10.0, -6.0 + 4.0 * u01(rng));
  const Index k = 10 + static_cast<Index>(10 * u01(rng));
  s.data = {dim, (random_matrix(k, dim, rng, 0.6).array() + 0.5).matrix()};
  s.state.sigma2 = 0.01 + 0.1 * u01(rng);
  s.state.displacement = Eigen::MatrixXd::Zero(s.mesh.node_count(), dim);
  s.state.responsibilities.values = random_responsibilities(s.mesh.node_count(), k, rng);
  s.state.pbar = vbifem::equivalent_probability(s.state.responsibilities);
  s.state.bbar = vbifem::equivalent_body_force(s.state.responsibilities, s.mesh.coords, s.data, s.state.sigma2);
  return s;
}

inline Objective objective_of(const FrozenStep& s) {
  return Objective{s.mesh, s.material, s.data.points, s.state.responsibilities.values,
                   s.state.sigma2, s.hyper.beta, s.hyper.gamma};
}

inline double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vbifem_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
