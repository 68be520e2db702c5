#include "vbifem/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "vbifem/error.hpp"

namespace vbifem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Error("key '" + key + "' expects a number, got '" + text + "'");
  return v;
}

template <class Int = int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error("key '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw Error("key '" + key + "' expects on/off, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text) {
  std::istringstream ss(text);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

ComponentValues to_components(const std::string& key, const std::string& text, int dim) {
  const auto tokens = split(text);
  if (static_cast<int>(tokens.size()) != dim)
    throw Error("key '" + key + "' expects " + std::to_string(dim) + " components");
  ComponentValues out;
  for (const auto& t : tokens) {
    if (t == "*")
      out.emplace_back(std::nullopt);
    else
      out.emplace_back(to_double(key, t));
  }
  return out;
}

Eigen::VectorXd to_vector(const std::string& key, const std::string& text, int dim) {
  const auto tokens = split(text);
  if (static_cast<int>(tokens.size()) != dim)
    throw Error("key '" + key + "' expects " + std::to_string(dim) + " components");
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = to_double(key, tokens[static_cast<std::size_t>(i)]);
  return v;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error("line " + std::to_string(line_no) + ": empty key or value");
    if (!out.emplace(key, value).second) throw Error("duplicate key '" + key + "'");
  }
  return out;
}

RunConfig parse_run_config(std::istream& in, int dimension) {
  if (dimension != 2 && dimension != 3) throw Error("dimension must be 2 or 3");
  RunConfig cfg;
  cfg.material.mode = dimension == 3 ? AnalysisMode::Solid3D : AnalysisMode::PlaneStress;
  for (const auto& [key, value] : parse_key_values(in)) {
    if (key == "beta") {
      cfg.hyper.beta = to_double(key, value);
    } else if (key == "gamma") {
      cfg.hyper.gamma = to_double(key, value);
    } else if (key == "max_iter") {
      cfg.hyper.max_iter = to_int(key, value);
    } else if (key == "tol") {
      cfg.hyper.tol = to_double(key, value);
    } else if (key == "sigma_floor") {
      cfg.hyper.sigma_floor = to_double(key, value);
    } else if (key == "lambda") {
      cfg.material.lambda = to_double(key, value);
    } else if (key == "mu") {
      cfg.material.mu = to_double(key, value);
    } else if (key == "thickness") {
      cfg.material.thickness = to_double(key, value);
    } else if (key == "mode") {
      if (value == "plane_stress")
        cfg.material.mode = AnalysisMode::PlaneStress;
      else if (value == "plane_strain")
        cfg.material.mode = AnalysisMode::PlaneStrain;
      else if (value == "solid3d")
        cfg.material.mode = AnalysisMode::Solid3D;
      else
        throw Error("unknown mode '" + value + "'");
    } else if (key == "energy_weighting") {
      cfg.hyper.energy_weighting = to_bool(key, value);
    } else if (key == "update_form") {
      if (value == "total")
        cfg.hyper.update_form = UpdateForm::Total;
      else if (value == "incremental")
        cfg.hyper.update_form = UpdateForm::Incremental;
      else
        throw Error("unknown update_form '" + value + "'");
    } else if (key == "direction") {
      if (value == "reference_to_current")
        cfg.hyper.direction = Direction::ReferenceToCurrent;
      else if (value == "current_to_reference")
        cfg.hyper.direction = Direction::CurrentToReference;
      else
        throw Error("unknown direction '" + value + "'");
    } else if (key == "cpd_kernel_width") {
      cfg.cpd.kernel_width = to_double(key, value);
    } else if (key == "cpd_lambda") {
      cfg.cpd.lambda_reg = to_double(key, value);
    } else if (key == "cpd_max_iter") {
      cfg.cpd.max_iter = to_int(key, value);
    } else if (key == "cpd_tol") {
      cfg.cpd.tol = to_double(key, value);
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
  if (cfg.material.dimension() != dimension) throw Error("mode does not match mesh dimension");
  cfg.material.validate();
  cfg.hyper.validate();
  cfg.cpd.validate();
  return cfg;
}

RunConfig read_run_config(const std::filesystem::path& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_run_config(in, dimension);
}

BoundaryConditions parse_boundary_conditions(std::istream& in, int dimension) {
  BoundaryConditions bcs;
  for (const auto& [key, value] : parse_key_values(in)) {
    if (key.rfind("dirichlet.", 0) == 0) {
      bcs.dirichlet[key.substr(10)] = to_components(key, value, dimension);
    } else if (key.rfind("dirichlet_node.", 0) == 0) {
      const std::string id = key.substr(15);
      bcs.node_dirichlet[to_int<long>(key, id)] = to_components(key, value, dimension);
    } else if (key.rfind("traction.", 0) == 0) {
      bcs.tractions[key.substr(9)] = to_vector(key, value, dimension);
    } else if (key == "body_force") {
      bcs.body_force = to_vector(key, value, dimension);
    } else {
      throw Error("unknown boundary-condition key '" + key + "'");
    }
  }
  for (const auto& [group, values] : bcs.dirichlet)
    if (bcs.tractions.count(group))
      throw Error("group '" + group + "' is both a Dirichlet and a traction boundary");
  return bcs;
}

BoundaryConditions read_boundary_conditions(const std::filesystem::path& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open boundary conditions " + path.string());
  return parse_boundary_conditions(in, dimension);
}

}  // namespace vbifem
