#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "vbifem/cpd.hpp"
#include "vbifem/elasticity.hpp"
#include "vbifem/forward.hpp"
#include "vbifem/solver.hpp"

namespace vbifem {

/// Flat `key = value` lines with `#` comments, as a key -> value map. Rejects duplicates.
std::map<std::string, std::string> parse_key_values(std::istream& in);

struct RunConfig {
  Material material;
  Hyperparams hyper;
  CpdParams cpd;
};

/// Recognised keys: beta, gamma, max_iter, tol, sigma_floor, lambda, mu, mode, thickness,
/// energy_weighting, update_form, direction, cpd_kernel_width, cpd_lambda, cpd_max_iter,
/// cpd_tol. Unknown keys are rejected; missing keys keep their defaults. The analysis mode
/// defaults to plane_stress in 2D and solid3d in 3D.
RunConfig parse_run_config(std::istream& in, int dimension);
RunConfig read_run_config(const std::filesystem::path& path, int dimension);

/// Boundary-condition files: `dirichlet.<group> = ux uy [uz]` (`*` leaves a component free),
/// `dirichlet_node.<id> = ...`, `traction.<group> = tx ty [tz]`, `body_force = bx by [bz]`.
BoundaryConditions parse_boundary_conditions(std::istream& in, int dimension);
BoundaryConditions read_boundary_conditions(const std::filesystem::path& path, int dimension);

}  // namespace vbifem
