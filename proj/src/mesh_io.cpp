#include "vbifem/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "vbifem/error.hpp"

namespace vbifem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Reads the next non-blank line, trimmed. Returns false at end of stream.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

std::string require_line(std::istream& in, const std::string& context) {
  std::string line;
  if (!next_line(in, line)) throw Error("unexpected end of file in " + context);
  return line;
}

long parse_count(const std::string& line, const std::string& section) {
  std::istringstream ss(line);
  long count = -1;
  std::string extra;
  if (!(ss >> count) || count < 0 || (ss >> extra))
    throw Error("malformed count line in " + section);
  return count;
}

bool parse_double(const std::string& token, double& value) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

void write_double(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

struct RawElement {
  int type = 0;
  int physical = 0;
  std::vector<long> node_ids;
};

int msh_nodes_for_type(int type) {
  switch (type) {
    case 1: return 2;
    case 2: return 3;
    case 4: return 4;
    case 15: return 1;
    default: return -1;
  }
}

}  // namespace

Mesh parse_msh(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "$MeshFormat")
    throw Error("malformed section delimiters: file must start with $MeshFormat");
  {
    std::istringstream ss(require_line(in, "$MeshFormat"));
    std::string version;
    int file_type = -1;
    ss >> version >> file_type;
    if (version.rfind("2.", 0) != 0 || file_type != 0)
      throw Error("only ASCII MSH version 2.2 is supported");
  }
  if (require_line(in, "$MeshFormat") != "$EndMeshFormat")
    throw Error("malformed section delimiters: missing $EndMeshFormat");

  std::map<int, std::string> physical_names;
  std::vector<long> ids;
  std::vector<std::array<double, 3>> xyz;
  std::vector<RawElement> raw;
  bool have_nodes = false;
  bool have_elements = false;

  while (next_line(in, line)) {
    if (line == "$PhysicalNames") {
      const long count = parse_count(require_line(in, line), "$PhysicalNames");
      for (long i = 0; i < count; ++i) {
        const std::string entry = require_line(in, "$PhysicalNames");
        if (entry == "$EndPhysicalNames") throw Error("physical name count mismatch");
        std::istringstream ss(entry);
        int dim = 0, tag = 0;
        ss >> dim >> tag;
        std::string rest;
        std::getline(ss, rest);
        rest = trim(rest);
        if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"')
          rest = rest.substr(1, rest.size() - 2);
        if (!ss.eof() && ss.fail()) throw Error("malformed $PhysicalNames entry");
        physical_names[tag] = rest;
      }
      if (require_line(in, "$PhysicalNames") != "$EndPhysicalNames")
        throw Error("physical name count mismatch");
    } else if (line == "$Nodes") {
      const long count = parse_count(require_line(in, line), "$Nodes");
      ids.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) {
        const std::string entry = require_line(in, "$Nodes");
        if (entry == "$EndNodes") throw Error("node count mismatch");
        std::istringstream ss(entry);
        long id = 0;
        std::array<double, 3> p{};
        if (!(ss >> id >> p[0] >> p[1] >> p[2])) throw Error("malformed node line: " + entry);
        ids.push_back(id);
        xyz.push_back(p);
      }
      if (require_line(in, "$Nodes") != "$EndNodes") throw Error("node count mismatch");
      have_nodes = true;
    } else if (line == "$Elements") {
      const long count = parse_count(require_line(in, line), "$Elements");
      for (long i = 0; i < count; ++i) {
        const std::string entry = require_line(in, "$Elements");
        if (entry == "$EndElements") throw Error("element count mismatch");
        std::istringstream ss(entry);
        long id = 0;
        int ntags = 0;
        RawElement el;
        if (!(ss >> id >> el.type >> ntags) || ntags < 0)
          throw Error("malformed element line: " + entry);
        for (int t = 0; t < ntags; ++t) {
          int tag = 0;
          if (!(ss >> tag)) throw Error("malformed element tags: " + entry);
          if (t == 0) el.physical = tag;
        }
        const int n = msh_nodes_for_type(el.type);
        if (n > 0) {
          el.node_ids.resize(static_cast<std::size_t>(n));
          for (auto& nid : el.node_ids)
            if (!(ss >> nid)) throw Error("malformed element nodes: " + entry);
        }
        raw.push_back(std::move(el));
      }
      if (require_line(in, "$Elements") != "$EndElements")
        throw Error("element count mismatch");
      have_elements = true;
    } else if (line.size() > 1 && line[0] == '$' && line.rfind("$End", 0) != 0) {
      const std::string end = "$End" + line.substr(1);
      std::string skip;
      do {
        if (!next_line(in, skip)) throw Error("malformed section delimiters: missing " + end);
      } while (skip != end);
    } else {
      throw Error("malformed section delimiters near: " + line);
    }
  }
  if (!have_nodes) throw Error("missing $Nodes section");
  if (!have_elements) throw Error("missing $Elements section");

  bool has_tet = false;
  for (const auto& el : raw) has_tet = has_tet || el.type == 4;

  Mesh mesh;
  mesh.dimension = has_tet ? 3 : 2;
  mesh.node_ids = ids;
  mesh.coords.resize(static_cast<Index>(ids.size()), mesh.dimension);
  std::unordered_map<long, Index> index_of;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!index_of.emplace(ids[i], static_cast<Index>(i)).second)
      throw Error("duplicate node id " + std::to_string(ids[i]));
    for (int c = 0; c < mesh.dimension; ++c) mesh.coords(static_cast<Index>(i), c) = xyz[i][c];
    if (mesh.dimension == 2 && xyz[i][2] != 0.0)
      throw Error("2D mesh node " + std::to_string(ids[i]) + " has nonzero z");
  }
  auto lookup = [&](long nid) {
    auto it = index_of.find(nid);
    if (it == index_of.end()) throw Error("element references undefined node " + std::to_string(nid));
    return it->second;
  };

  const int cell_type = has_tet ? 4 : 2;
  const int facet_type = has_tet ? 2 : 1;
  for (const auto& el : raw) {
    if (el.type == cell_type) {
      Element cell;
      cell.kind = has_tet ? ElementKind::Tet4 : ElementKind::Tri3;
      for (std::size_t a = 0; a < el.node_ids.size(); ++a) cell.nodes[a] = lookup(el.node_ids[a]);
      mesh.elements.push_back(cell);
    } else if (el.type == facet_type) {
      Facet f;
      for (long nid : el.node_ids) f.push_back(lookup(nid));
      if (el.physical == 0) continue;
      auto it = physical_names.find(el.physical);
      const std::string name = it != physical_names.end() ? it->second : std::to_string(el.physical);
      mesh.boundary_groups[name].push_back(std::move(f));
    } else if (el.type != 15) {
      ++mesh.skipped_elements;
    }
  }
  if (mesh.elements.empty()) throw Error("mesh contains no TRI3 or TET4 elements");
  if (mesh.skipped_elements > 0)
    warn("skipped " + std::to_string(mesh.skipped_elements) + " elements of unsupported type");

  orient_elements(mesh);
  mesh.validate();
  return mesh;
}

Mesh read_msh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file " + path.string());
  return parse_msh(in);
}

void write_msh(std::ostream& out, const Mesh& mesh) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  std::map<std::string, int> tag_of;
  if (!mesh.boundary_groups.empty()) {
    out << "$PhysicalNames\n" << mesh.boundary_groups.size() << '\n';
    int tag = 1;
    for (const auto& [name, facets] : mesh.boundary_groups) {
      tag_of[name] = tag;
      out << mesh.dimension - 1 << ' ' << tag << " \"" << name << "\"\n";
      ++tag;
    }
    out << "$EndPhysicalNames\n";
  }
  out << "$Nodes\n" << mesh.node_count() << '\n';
  for (Index i = 0; i < mesh.node_count(); ++i) {
    const long id = mesh.node_ids.empty() ? static_cast<long>(i + 1)
                                          : mesh.node_ids[static_cast<std::size_t>(i)];
    out << id;
    for (int c = 0; c < 3; ++c) {
      out << ' ';
      write_double(out, c < mesh.dimension ? mesh.coords(i, c) : 0.0);
    }
    out << '\n';
  }
  out << "$EndNodes\n";

  auto node_id = [&](Index i) {
    return mesh.node_ids.empty() ? static_cast<long>(i + 1) : mesh.node_ids[static_cast<std::size_t>(i)];
  };
  std::size_t total = mesh.elements.size();
  for (const auto& [name, facets] : mesh.boundary_groups) total += facets.size();
  out << "$Elements\n" << total << '\n';
  long id = 1;
  const int facet_type = mesh.dimension == 3 ? 2 : 1;
  for (const auto& [name, facets] : mesh.boundary_groups) {
    for (const Facet& f : facets) {
      out << id++ << ' ' << facet_type << " 2 " << tag_of[name] << ' ' << tag_of[name];
      for (Index n : f) out << ' ' << node_id(n);
      out << '\n';
    }
  }
  for (const Element& el : mesh.elements) {
    out << id++ << ' ' << (el.kind == ElementKind::Tet4 ? 4 : 2) << " 2 0 0";
    for (int a = 0; a < el.size(); ++a) out << ' ' << node_id(el.nodes[a]);
    out << '\n';
  }
  out << "$EndElements\n";
}

PointSet parse_point_cloud(std::istream& in, int dimension) {
  if (dimension < 0) throw Error("invalid point cloud dimension");
  std::vector<double> values;
  std::string line;
  long row = 0;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> fields;
    std::string token;
    while (ss >> token) {
      double v = 0.0;
      if (!parse_double(token, v))
        throw Error("non-numeric field '" + token + "' on line " + std::to_string(line_no));
      fields.push_back(v);
    }
    if (dimension == 0) {
      if (fields.size() != 2 && fields.size() != 3)
        throw Error("cannot infer point dimension from line " + std::to_string(line_no));
      dimension = static_cast<int>(fields.size());
    }
    if (static_cast<int>(fields.size()) != dimension)
      throw Error("column count " + std::to_string(fields.size()) + " on line " +
                  std::to_string(line_no) + ", expected " + std::to_string(dimension));
    values.insert(values.end(), fields.begin(), fields.end());
    ++row;
  }
  if (row == 0) throw Error("point cloud has no data rows");
  PointSet set;
  set.dimension = dimension;
  set.points = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), row, dimension);
  if (!set.points.allFinite()) throw Error("point cloud has non-finite values");
  return set;
}

PointSet parse_point_cloud(std::istream& in) { return parse_point_cloud(in, 0); }

PointSet read_point_cloud(const std::filesystem::path& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open point cloud " + path.string());
  return parse_point_cloud(in, dimension);
}

void write_point_cloud(std::ostream& out, const Eigen::MatrixXd& points) {
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index c = 0; c < points.cols(); ++c) {
      if (c) out << ' ';
      write_double(out, points(i, c));
    }
    out << '\n';
  }
}

void write_vtk(std::ostream& out, const Mesh& mesh, const PointFields& fields) {
  const Index n = mesh.node_count();
  for (const auto& [name, data] : fields) {
    if (data.rows() != n)
      throw Error("point field '" + name + "' has " + std::to_string(data.rows()) +
                  " entries for " + std::to_string(n) + " nodes");
    if (data.cols() != 1 && data.cols() != mesh.dimension)
      throw Error("point field '" + name + "' must be scalar or D-vector valued");
  }

  out << "# vtk DataFile Version 3.0\nvbifem\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (Index i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      if (c) out << ' ';
      write_double(out, c < mesh.dimension ? mesh.coords(i, c) : 0.0);
    }
    out << '\n';
  }
  std::size_t cell_ints = 0;
  for (const Element& el : mesh.elements) cell_ints += static_cast<std::size_t>(el.size()) + 1;
  out << "CELLS " << mesh.elements.size() << ' ' << cell_ints << '\n';
  for (const Element& el : mesh.elements) {
    out << el.size();
    for (int a = 0; a < el.size(); ++a) out << ' ' << el.nodes[a];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.elements.size() << '\n';
  for (const Element& el : mesh.elements) out << (el.kind == ElementKind::Tri3 ? 5 : 10) << '\n';

  if (fields.empty()) return;
  out << "POINT_DATA " << n << '\n';
  for (const auto& [name, data] : fields) {
    if (data.cols() == 1) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Index i = 0; i < n; ++i) {
        write_double(out, data(i, 0));
        out << '\n';
      }
    } else {
      out << "VECTORS " << name << " double\n";
      for (Index i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
          if (c) out << ' ';
          write_double(out, c < data.cols() ? data(i, c) : 0.0);
        }
        out << '\n';
      }
    }
  }
}

}  // namespace vbifem
