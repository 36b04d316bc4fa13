#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "vmsolid/cases.hpp"
#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// Removes a trailing `#` comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string as_string(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  if (v.find_first_of("\"(), ") != std::string::npos)
    throw ConfigError("expected a string, got '" + v + "'");
  return v;
}

double as_double(const std::string& v) {
  const std::string s = trim(v);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("expected a number, got '" + s + "'");
  return x;
}

int as_int(const std::string& v) {
  const double x = as_double(v);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    throw ConfigError("expected an integer, got '" + trim(v) + "'");
  return static_cast<int>(x);
}

bool as_bool(const std::string& v) {
  const std::string s = trim(v);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("expected true or false, got '" + s + "'");
}

std::vector<std::string> tuple_items(const std::string& v) {
  const std::string s = trim(v);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw ConfigError("expected a parenthesized tuple, got '" + s + "'");
  auto items = split(s.substr(1, s.size() - 2), ',');
  if (items.empty() || items.size() > 3)
    throw ConfigError("expected 1 to 3 tuple entries, got '" + s + "'");
  return items;
}

Triple as_triple(const std::string& v) {
  Triple t{0.0, 0.0, 0.0};
  const auto items = tuple_items(v);
  for (std::size_t i = 0; i < items.size(); ++i) t[i] = as_double(items[i]);
  return t;
}

std::array<int, 3> as_int_triple(const std::string& v) {
  std::array<int, 3> t{1, 1, 1};
  const auto items = tuple_items(v);
  for (std::size_t i = 0; i < items.size(); ++i) t[i] = as_int(items[i]);
  return t;
}

std::array<bool, 3> as_bool_triple(const std::string& v) {
  std::array<bool, 3> t{true, true, true};
  const auto items = tuple_items(v);
  for (std::size_t i = 0; i < items.size(); ++i) t[i] = as_bool(items[i]);
  return t;
}

BCConfig& bc_entry(CaseConfig& c, const std::string& name) {
  for (auto& bc : c.bcs)
    if (bc.name == name) return bc;
  BCConfig bc;
  bc.name = name;
  c.bcs.push_back(bc);
  return c.bcs.back();
}

ProbeConfig& probe_entry(CaseConfig& c, const std::string& name) {
  for (auto& p : c.output.probes)
    if (p.name == name) return p;
  ProbeConfig p;
  p.name = name;
  c.output.probes.push_back(p);
  return c.output.probes.back();
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch == '-';
  });
}

[[noreturn]] void unknown_key(const std::string& key) {
  throw ConfigError("unknown key '" + key + "'");
}

void set_key(CaseConfig& c, const std::string& key, const std::string& value) {
  const auto parts = split(key, '.');
  if (parts.size() < 2) unknown_key(key);
  std::string section = parts[0];
  if (section == "mesh") section = "geometry";
  const std::string& k = parts[1];

  if (section == "bc") {
    if (parts.size() != 3 || !valid_name(parts[1])) unknown_key(key);
    const std::string& field = parts[2];
    if (field == "type" && as_string(value) == "none") {
      std::erase_if(c.bcs, [&](const BCConfig& bc) { return bc.name == parts[1]; });
      return;
    }
    static const std::set<std::string> fields{
        "type", "tag", "value", "components", "time", "duration", "omega",
        "grad_x", "grad_y", "grad_z", "center"};
    if (!fields.count(field)) unknown_key(key);
    BCConfig& bc = bc_entry(c, parts[1]);
    if (field == "type") bc.type = as_string(value);
    else if (field == "tag") bc.tag = as_string(value);
    else if (field == "value") bc.value = as_triple(value);
    else if (field == "components") bc.components = as_bool_triple(value);
    else if (field == "time") bc.time = as_string(value);
    else if (field == "duration") bc.duration = as_double(value);
    else if (field == "omega") bc.omega = as_double(value);
    else if (field == "grad_x") bc.gradient[0] = as_triple(value);
    else if (field == "grad_y") bc.gradient[1] = as_triple(value);
    else if (field == "grad_z") bc.gradient[2] = as_triple(value);
    else if (field == "center") bc.center = as_triple(value);
    return;
  }
  if (section == "output" && k == "probe") {
    if (parts.size() != 4 || !valid_name(parts[2])) unknown_key(key);
    const std::string& field = parts[3];
    if (field != "point" && field != "field") unknown_key(key);
    ProbeConfig& p = probe_entry(c, parts[2]);
    if (field == "point") p.point = as_triple(value);
    else p.field = probe_field_from_string(as_string(value));
    return;
  }
  if (parts.size() != 2) unknown_key(key);

  using Setter = std::function<void(CaseConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters{
      {"case.name", [](CaseConfig& c, const std::string& v) { c.name = as_string(v); }},
      {"case.based_on", [](CaseConfig& c, const std::string& v) { c.preset = as_string(v); }},
      {"geometry.kind", [](CaseConfig& c, const std::string& v) { c.geometry.kind = as_string(v); }},
      {"geometry.n", [](CaseConfig& c, const std::string& v) { c.geometry.n = as_int(v); }},
      {"geometry.scale", [](CaseConfig& c, const std::string& v) { c.geometry.scale = as_double(v); }},
      {"geometry.dim", [](CaseConfig& c, const std::string& v) { c.geometry.dim = as_int(v); }},
      {"geometry.extents", [](CaseConfig& c, const std::string& v) { c.geometry.extents = as_triple(v); }},
      {"geometry.subdivisions", [](CaseConfig& c, const std::string& v) { c.geometry.subdivisions = as_int_triple(v); }},
      {"geometry.origin", [](CaseConfig& c, const std::string& v) { c.geometry.origin = as_triple(v); }},
      {"geometry.rotation_axis", [](CaseConfig& c, const std::string& v) { c.geometry.rotation_axis = as_triple(v); }},
      {"geometry.rotation_deg", [](CaseConfig& c, const std::string& v) { c.geometry.rotation_deg = as_double(v); }},
      {"geometry.rotation_center", [](CaseConfig& c, const std::string& v) { c.geometry.rotation_center = as_triple(v); }},
      {"geometry.file", [](CaseConfig& c, const std::string& v) { c.geometry.file = as_string(v); }},
      {"material.kind", [](CaseConfig& c, const std::string& v) { c.material.kind = material_kind_from_string(as_string(v)); }},
      {"material.E", [](CaseConfig& c, const std::string& v) { c.material.E = as_double(v); }},
      {"material.nu", [](CaseConfig& c, const std::string& v) { c.material.nu = as_double(v); }},
      {"material.rho0", [](CaseConfig& c, const std::string& v) { c.material.rho0 = as_double(v); }},
      {"time.scheme", [](CaseConfig& c, const std::string& v) { c.solver.scheme = scheme_from_string(as_string(v)); }},
      {"time.dt", [](CaseConfig& c, const std::string& v) { c.solver.dt = as_double(v); }},
      {"time.t_end", [](CaseConfig& c, const std::string& v) { c.t_end = as_double(v); }},
      {"stabilization.alpha", [](CaseConfig& c, const std::string& v) { c.solver.stabilization.alpha = as_double(v); }},
      {"stabilization.model", [](CaseConfig& c, const std::string& v) { c.solver.stabilization.model = tau_model_from_string(as_string(v)); }},
      {"stabilization.enabled", [](CaseConfig& c, const std::string& v) { c.solver.stabilization.enabled = as_bool(v); }},
      {"newton.tol", [](CaseConfig& c, const std::string& v) { c.solver.newton_tol = as_double(v); }},
      {"newton.max_iter", [](CaseConfig& c, const std::string& v) { c.solver.newton_max_iter = as_int(v); }},
      {"newton.abs_tol", [](CaseConfig& c, const std::string& v) { c.solver.newton_abs_tol = as_double(v); }},
      {"linear.kind", [](CaseConfig& c, const std::string& v) {
         const std::string s = as_string(v);
         if (s == "direct") c.solver.linear.kind = LinearSolverConfig::Kind::direct;
         else if (s == "iterative") c.solver.linear.kind = LinearSolverConfig::Kind::iterative;
         else throw ConfigError("unknown linear.kind '" + s + "'");
       }},
      {"linear.tol", [](CaseConfig& c, const std::string& v) { c.solver.linear.tol = as_double(v); }},
      {"linear.max_iter", [](CaseConfig& c, const std::string& v) { c.solver.linear.max_iter = as_int(v); }},
      {"linear.restart", [](CaseConfig& c, const std::string& v) { c.solver.linear.restart = as_int(v); }},
      {"output.vtk_every", [](CaseConfig& c, const std::string& v) { c.output.vtk_every = as_int(v); }},
  };
  const auto it = setters.find(section + "." + k);
  if (it == setters.end()) unknown_key(key);
  it->second(c, value);
}

struct Assignment {
  int line;
  std::string key;
  std::string value;
};

Assignment split_assignment(const std::string& text, int line) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
  Assignment a{line, trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
  if (a.key.empty()) throw ConfigError("missing key before '='");
  if (a.value.empty()) throw ConfigError("missing value for '" + a.key + "'");
  return a;
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

std::string fmt(const Triple& t) {
  return "(" + fmt(t[0]) + ", " + fmt(t[1]) + ", " + fmt(t[2]) + ")";
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

CaseConfig parse_case(const std::string& text) {
  std::vector<Assignment> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    try {
      lines.push_back(split_assignment(line, number));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }

  CaseConfig c;
  bool seeded = false;
  for (const auto& a : lines) {
    if (a.key != "case.preset") continue;
    if (seeded)
      throw ConfigError("line " + std::to_string(a.line) + ": case.preset given twice");
    try {
      c = preset(as_string(a.value));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(a.line) + ": " + e.what());
    }
    seeded = true;
  }

  std::set<std::string> sections;
  for (const auto& a : lines) {
    if (a.key == "case.preset") continue;
    try {
      set_key(c, a.key, a.value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(a.line) + ": " + e.what());
    }
    std::string section = a.key.substr(0, a.key.find('.'));
    sections.insert(section == "mesh" ? "geometry" : section);
  }
  if (!seeded)
    for (const char* required : {"geometry", "material", "time"})
      if (!sections.count(required))
        throw ConfigError(std::string("missing mandatory section '") + required +
                          "' (or a case.preset)");
  validate(c);
  return c;
}

CaseConfig parse_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open case file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_case(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_override(CaseConfig& c, const std::string& assignment) {
  try {
    const Assignment a = split_assignment(assignment, 0);
    if (a.key == "case.preset") throw ConfigError("case.preset cannot be overridden");
    set_key(c, a.key, a.value);
  } catch (const ConfigError& e) {
    throw ConfigError("--set " + assignment + ": " + e.what());
  }
}

std::string serialize_case(const CaseConfig& c) {
  std::ostringstream o;
  const auto& g = c.geometry;
  o << "case.name = " << quote(c.name) << "\n";
  if (!c.preset.empty()) o << "case.based_on = " << quote(c.preset) << "\n";
  o << "\ngeometry.kind = " << quote(g.kind) << "\n"
    << "geometry.n = " << g.n << "\n"
    << "geometry.scale = " << fmt(g.scale) << "\n"
    << "geometry.dim = " << g.dim << "\n"
    << "geometry.extents = " << fmt(g.extents) << "\n"
    << "geometry.subdivisions = (" << g.subdivisions[0] << ", " << g.subdivisions[1]
    << ", " << g.subdivisions[2] << ")\n"
    << "geometry.origin = " << fmt(g.origin) << "\n"
    << "geometry.rotation_axis = " << fmt(g.rotation_axis) << "\n"
    << "geometry.rotation_deg = " << fmt(g.rotation_deg) << "\n"
    << "geometry.rotation_center = " << fmt(g.rotation_center) << "\n"
    << "geometry.file = " << quote(g.file) << "\n";
  o << "\nmaterial.kind = " << quote(to_string(c.material.kind)) << "\n"
    << "material.E = " << fmt(c.material.E) << "\n"
    << "material.nu = " << fmt(c.material.nu) << "\n"
    << "material.rho0 = " << fmt(c.material.rho0) << "\n";
  o << "\ntime.scheme = " << quote(to_string(c.solver.scheme)) << "\n"
    << "time.dt = " << fmt(c.solver.dt) << "\n"
    << "time.t_end = " << fmt(c.t_end) << "\n";
  const auto& s = c.solver.stabilization;
  o << "\nstabilization.alpha = " << fmt(s.alpha) << "\n"
    << "stabilization.model = " << quote(to_string(s.model)) << "\n"
    << "stabilization.enabled = " << (s.enabled ? "true" : "false") << "\n";
  o << "\nnewton.tol = " << fmt(c.solver.newton_tol) << "\n"
    << "newton.max_iter = " << c.solver.newton_max_iter << "\n"
    << "newton.abs_tol = " << fmt(c.solver.newton_abs_tol) << "\n";
  const auto& l = c.solver.linear;
  o << "\nlinear.kind = "
    << quote(l.kind == LinearSolverConfig::Kind::direct ? "direct" : "iterative") << "\n"
    << "linear.tol = " << fmt(l.tol) << "\n"
    << "linear.max_iter = " << l.max_iter << "\n"
    << "linear.restart = " << l.restart << "\n";
  for (const auto& bc : c.bcs) {
    const std::string p = "bc." + bc.name + ".";
    o << "\n" << p << "type = " << quote(bc.type) << "\n";
    o << p << "tag = " << quote(bc.tag) << "\n";
    o << p << "value = " << fmt(bc.value) << "\n";
    o << p << "components = (" << std::boolalpha << bc.components[0] << ", "
      << bc.components[1] << ", " << bc.components[2] << ")\n";
    o << p << "time = " << quote(bc.time) << "\n";
    o << p << "duration = " << fmt(bc.duration) << "\n";
    o << p << "omega = " << fmt(bc.omega) << "\n";
    o << p << "grad_x = " << fmt(bc.gradient[0]) << "\n";
    o << p << "grad_y = " << fmt(bc.gradient[1]) << "\n";
    o << p << "grad_z = " << fmt(bc.gradient[2]) << "\n";
    o << p << "center = " << fmt(bc.center) << "\n";
  }
  o << "\noutput.vtk_every = " << c.output.vtk_every << "\n";
  for (const auto& p : c.output.probes) {
    o << "output.probe." << p.name << ".point = " << fmt(p.point) << "\n";
    o << "output.probe." << p.name << ".field = " << quote(to_string(p.field)) << "\n";
  }
  return o.str();
}

}  // namespace vmsolid
