#include <doctest.h>

#include <limits>

#include "support.hpp"

using namespace vbifem;

TEST_CASE("gaussian kernel examples") {
  CHECK(gaussian_kernel(Eigen::MatrixXd::Zero(1, 2), 0.3) == Eigen::MatrixXd::Ones(1, 1));
  CHECK(gaussian_kernel(Eigen::MatrixXd::Ones(2, 3), 0.3) == Eigen::MatrixXd::Ones(2, 2));

  Eigen::MatrixXd two(2, 2);
  two << 0, 0, 0.5 * std::sqrt(2.0), 0;
  const Eigen::MatrixXd g = gaussian_kernel(two, 0.5);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(1, 0) == g(0, 1));

  std::mt19937 rng(61);
  const Eigen::MatrixXd pts = oracle::random_matrix(30, 3, rng);
  const Eigen::MatrixXd k = gaussian_kernel(pts, 0.4);
  CHECK((k - k.transpose()).norm() == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff() >= -1e-12);
  CHECK_THROWS_AS(gaussian_kernel(pts, 0.0), Error);
}

TEST_CASE("parameter validation") {
  CpdParams p;
  CHECK_NOTHROW(p.validate());
  p.kernel_width = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.lambda_reg = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.tol = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);

  const PointSet a{2, Eigen::MatrixXd::Zero(3, 2)};
  CHECK_THROWS_AS(cpd_register(a, PointSet{3, Eigen::MatrixXd::Zero(3, 3)}, {}), Error);
  CHECK_THROWS_AS(cpd_register(PointSet{2, Eigen::MatrixXd(0, 2)}, a, {}), Error);
}

TEST_CASE("identical sets give zero displacement") {
  const Mesh mesh = meshgen::rectangle(1.0, 1.0, 5, 5);
  const PointSet pts{2, mesh.coords};
  const CpdResult r = cpd_register(pts, pts, {});
  CHECK(r.displacement.rowwise().norm().maxCoeff() <= 1e-6 * bbox_diagonal(mesh.coords));
  CHECK(r.converged);
}

TEST_CASE("rigid translation with a wide kernel") {
  const Mesh mesh = meshgen::rectangle(1.0, 1.0, 5, 5);
  const Eigen::RowVector2d t(0.06, -0.04);
  const PointSet moving{2, mesh.coords};
  const PointSet target{2, mesh.coords.rowwise() + t};
  CpdParams p;
  p.kernel_width = 5.0;
  p.max_iter = 500;
  const CpdResult r = cpd_register(moving, target, p);
  for (Index n = 0; n < mesh.node_count(); ++n) CHECK((r.displacement.row(n) - t).norm() <= 0.05 * t.norm());

  // Well separated: the variance only shrinks after the first update.
  for (std::size_t i = 2; i < r.sigma2_history.size(); ++i)
    CHECK(r.sigma2_history[i] <= r.sigma2_history[i - 1] * (1.0 + 1e-9));
}

TEST_CASE("narrow kernel and weak smoothing reduce to the centroid update") {
  std::mt19937 rng(67);
  const PointSet moving{2, oracle::random_matrix(12, 2, rng)};
  const PointSet target{2, oracle::random_matrix(20, 2, rng)};
  CpdParams p;
  p.kernel_width = 1e-6;
  p.lambda_reg = 1e-12;
  p.max_iter = 1;
  const CpdResult r = cpd_register(moving, target, p);

  const double s2 = initial_sigma2(moving.points, target);
  const ResponsibilityMatrix resp = responsibilities(moving.points, target, s2, Eigen::VectorXd::Ones(12));
  const Eigen::VectorXd pbar = equivalent_probability(resp);
  const Eigen::MatrixXd centroid = (resp.values * target.points).array().colwise() / pbar.array();
  CHECK(oracle::relative_difference(r.displacement, centroid - moving.points) <= 1e-6);
}

TEST_CASE("registration is deterministic") {
  std::mt19937 rng(71);
  const PointSet moving{3, oracle::random_matrix(40, 3, rng)};
  const PointSet target{3, moving.points * 1.1};
  CpdParams p;
  p.max_iter = 30;
  const CpdResult a = cpd_register(moving, target, p);
  const CpdResult b = cpd_register(moving, target, p);
  CHECK(a.displacement == b.displacement);
  CHECK(a.sigma2_history == b.sigma2_history);
}

TEST_CASE("paired closing case: the elastic prior beats a tuned kernel baseline") {
  // Deformed plate registered back onto its reference nodes.
  const Mesh plate = meshgen::plate_with_hole();
  const Material material{0.58e6, 0.38e6, AnalysisMode::PlaneStress, 0.01};
  BoundaryConditions bc;
  bc.dirichlet["bottom"] = {0.0, 0.0};
  bc.tractions["top"] = Eigen::Vector2d(5e3, 5e4);
  const ForwardSolution sol = forward_solve(plate, material, bc);
  const DeformedConfiguration deformed = deform_mesh(plate, sol.displacement);
  const PointSet reference{2, plate.coords};

  Hyperparams h;
  h.beta = 1e-5;
  h.gamma = 1e-7;
  h.direction = Direction::CurrentToReference;
  const RecoveryResult fem = recover(deformed.mesh, reference, material, h);
  const ErrorReport fem_err =
      average_nodal_error(fem.mapped_positions(deformed.mesh), plate.coords, deformed.mesh.coords);

  double best_cpd = std::numeric_limits<double>::infinity();
  for (double width : {0.5, 1.0, 2.0}) {
    CpdParams p;
    p.kernel_width = width;
    const CpdResult cpd = cpd_register(deformed.points, reference, p);
    const ErrorReport e =
        average_nodal_error(deformed.points.points + cpd.displacement, plate.coords, deformed.mesh.coords);
    best_cpd = std::min(best_cpd, e.relative_percent);
  }
  MESSAGE("vbi-fem " << fem_err.relative_percent << "%, best cpd " << best_cpd << "%");
  CHECK(fem_err.relative_percent <= 15.0);
  CHECK(fem_err.relative_percent < best_cpd);
}
