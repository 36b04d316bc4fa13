#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "vmsolid/error.hpp"
#include "vmsolid/mesh.hpp"

namespace vmsolid {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

class MshParser {
 public:
  explicit MshParser(std::istream& in) : in_(in) {}

  Mesh parse() {
    std::string line;
    bool have_format = false, have_nodes = false, have_elements = false;
    while (next_line(line)) {
      if (line.empty()) continue;
      if (line == "$MeshFormat") {
        read_format();
        have_format = true;
      } else if (line == "$PhysicalNames") {
        read_physical_names();
      } else if (line == "$Nodes") {
        read_nodes();
        have_nodes = true;
      } else if (line == "$Elements") {
        read_elements();
        have_elements = true;
      } else if (line.front() == '$' && line.rfind("$End", 0) != 0) {
        skip_section(line.substr(1));
      } else {
        fail("unexpected line '" + line + "'");
      }
    }
    if (!have_format) fail("missing $MeshFormat section");
    if (!have_nodes) fail("missing $Nodes section");
    if (!have_elements) fail("missing $Elements section");
    return build();
  }

 private:
  struct RawElement {
    int type;
    int physical;
    std::vector<long> nodes;
  };

  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    line = trim(line);
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("gmsh line " + std::to_string(line_no_) + ": " + what);
  }

  void expect_end(const std::string& name) {
    std::string line;
    if (!next_line(line) || line != "$End" + name)
      fail("expected $End" + name);
  }

  void read_format() {
    std::string line;
    if (!next_line(line)) fail("truncated $MeshFormat");
    std::istringstream ss(line);
    std::string version;
    int file_type = -1, data_size = 0;
    if (!(ss >> version >> file_type >> data_size)) fail("malformed $MeshFormat header");
    if (version.rfind("2.", 0) != 0) fail("unsupported MSH version " + version);
    if (file_type != 0) fail("binary MSH files are not supported");
    expect_end("MeshFormat");
  }

  void read_physical_names() {
    std::string line;
    if (!next_line(line)) fail("truncated $PhysicalNames");
    const int count = parse_count(line);
    for (int i = 0; i < count; ++i) {
      if (!next_line(line)) fail("truncated $PhysicalNames");
      std::istringstream ss(line);
      int dim = 0, tag = 0;
      if (!(ss >> dim >> tag)) fail("malformed physical name");
      std::string rest;
      std::getline(ss, rest);
      rest = trim(rest);
      if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"')
        rest = rest.substr(1, rest.size() - 2);
      names_[tag] = rest;
    }
    expect_end("PhysicalNames");
  }

  void read_nodes() {
    std::string line;
    if (!next_line(line)) fail("truncated $Nodes");
    const int count = parse_count(line);
    for (int i = 0; i < count; ++i) {
      if (!next_line(line)) fail("truncated $Nodes");
      std::istringstream ss(line);
      long id = 0;
      double x = 0, y = 0, z = 0;
      if (!(ss >> id >> x >> y >> z)) fail("malformed node record");
      node_index_[id] = static_cast<int>(nodes_.size());
      nodes_.emplace_back(x, y, z);
    }
    expect_end("Nodes");
  }

  void read_elements() {
    std::string line;
    if (!next_line(line)) fail("truncated $Elements");
    const int count = parse_count(line);
    for (int i = 0; i < count; ++i) {
      if (!next_line(line)) fail("truncated $Elements");
      std::istringstream ss(line);
      long id = 0;
      int type = 0, ntags = 0;
      if (!(ss >> id >> type >> ntags)) fail("malformed element record");
      std::vector<long> tags(ntags);
      for (auto& t : tags)
        if (!(ss >> t)) fail("malformed element tags");
      int nn = 0;
      switch (type) {
        case 1: nn = 2; break;
        case 2: nn = 3; break;
        case 4: nn = 4; break;
        case 15: continue;  // point elements carry no geometry we use
        default: fail("unsupported element type " + std::to_string(type));
      }
      RawElement raw{type, ntags > 0 ? static_cast<int>(tags[0]) : 0, {}};
      raw.nodes.resize(nn);
      for (auto& n : raw.nodes)
        if (!(ss >> n)) fail("malformed element node list");
      raw_.push_back(std::move(raw));
    }
    expect_end("Elements");
  }

  void skip_section(const std::string& name) {
    std::string line;
    while (next_line(line))
      if (line == "$End" + name) return;
    fail("unterminated section $" + name);
  }

  int parse_count(const std::string& line) {
    std::istringstream ss(line);
    long n = -1;
    if (!(ss >> n) || n < 0) fail("malformed count '" + line + "'");
    return static_cast<int>(n);
  }

  int node_id(long raw) const {
    auto it = node_index_.find(raw);
    if (it == node_index_.end())
      throw MeshError("gmsh: element references unknown node " + std::to_string(raw));
    return it->second;
  }

  Mesh build() {
    bool has_tet = false;
    for (const auto& r : raw_) has_tet |= (r.type == 4);
    const int dim = has_tet ? 3 : 2;
    const int cell_type = has_tet ? 4 : 2;
    const int facet_type = has_tet ? 2 : 1;

    std::vector<Element> elements;
    std::vector<BoundaryFacet> facets;
    for (const auto& r : raw_) {
      if (r.type == cell_type) {
        Element el{-1, -1, -1, -1};
        for (std::size_t a = 0; a < r.nodes.size(); ++a) el[a] = node_id(r.nodes[a]);
        elements.push_back(el);
      } else if (r.type == facet_type) {
        BoundaryFacet f;
        for (std::size_t a = 0; a < r.nodes.size(); ++a) f.nodes[a] = node_id(r.nodes[a]);
        auto it = names_.find(r.physical);
        f.tag = it != names_.end() ? it->second : std::to_string(r.physical);
        facets.push_back(std::move(f));
      }
    }
    if (elements.empty()) throw MeshError("gmsh: no cells of the mesh dimension");
    return Mesh(dim, std::move(nodes_), std::move(elements), std::move(facets));
  }

  std::istream& in_;
  int line_no_ = 0;
  std::map<int, std::string> names_;
  std::unordered_map<long, int> node_index_;
  std::vector<Vec3> nodes_;
  std::vector<RawElement> raw_;
};

}  // namespace

Mesh read_gmsh(std::istream& in) { return MshParser(in).parse(); }

Mesh read_gmsh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  return read_gmsh(in);
}

}  // namespace vmsolid
