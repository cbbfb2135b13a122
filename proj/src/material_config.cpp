#include "badlands/material_config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "badlands/errors.hpp"
#include "badlands/units.hpp"

#ifndef BADLANDS_DATA_DIR
#define BADLANDS_DATA_DIR "data"
#endif

namespace badlands {

namespace {

std::string where(const std::string& source, const YAML::Node& node) {
  return source + ":" + std::to_string(node.Mark().line + 1);
}

[[noreturn]] void fail(const std::string& source, const YAML::Node& node, const std::string& field,
                       const std::string& message) {
  throw ConfigError(where(source, node) + ": field '" + field + "': " + message);
}

void check_keys(const std::string& source, const YAML::Node& node, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(source, node, "<entry>", "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.contains(key)) fail(source, kv.first, key, "unknown field");
  }
}

double number(const std::string& source, const YAML::Node& parent, const char* field) {
  const YAML::Node n = parent[field];
  if (!n) fail(source, parent, field, "missing");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(source, n, field, "expected a number, got '" + n.Scalar() + "'");
  }
}

double number_or(const std::string& source, const YAML::Node& parent, const char* field, double fallback) {
  return parent[field] ? number(source, parent, field) : fallback;
}

std::string text(const std::string& source, const YAML::Node& parent, const char* field) {
  const YAML::Node n = parent[field];
  if (!n) fail(source, parent, field, "missing");
  if (!n.IsScalar()) fail(source, n, field, "expected a string");
  return n.Scalar();
}

MaterialModel parse_material(const std::string& source, const YAML::Node& node,
                             const std::vector<MaterialModel>& earlier) {
  check_keys(source, node, {"name", "kind", "base", "porosity", "source", "static_epsilon", "oscillators", "drude"});
  MaterialModel m;
  if (node["base"]) {
    const auto base = text(source, node, "base");
    auto it = std::find_if(earlier.begin(), earlier.end(), [&](const auto& e) { return e.name == base; });
    if (it == earlier.end()) fail(source, node["base"], "base", "refers to unknown material '" + base + "'");
    m = *it;
  }
  m.name = text(source, node, "name");
  if (node["kind"]) {
    const auto kind = text(source, node, "kind");
    if (kind == "perfect-mirror")
      m.kind = MaterialKind::PerfectMirror;
    else if (kind == "oscillator-model")
      m.kind = MaterialKind::OscillatorModel;
    else
      fail(source, node["kind"], "kind", "expected 'perfect-mirror' or 'oscillator-model', got '" + kind + "'");
  }
  if (node["source"]) m.source = text(source, node, "source");
  if (node["static_epsilon"]) m.static_epsilon = number(source, node, "static_epsilon");
  m.porosity = number_or(source, node, "porosity", node["base"] ? m.porosity : 0.0);

  if (const auto list = node["oscillators"]) {
    if (!list.IsSequence()) fail(source, list, "oscillators", "expected a list");
    m.oscillators.clear();
    for (const auto& o : list) {
      check_keys(source, o, {"strength", "resonance_eV", "damping_eV"});
      m.oscillators.push_back({number(source, o, "strength"), number(source, o, "resonance_eV"),
                               number_or(source, o, "damping_eV", 0.0)});
    }
  }
  if (const auto list = node["drude"]) {
    if (!list.IsSequence()) fail(source, list, "drude", "expected a list");
    m.drude.clear();
    for (const auto& d : list) {
      check_keys(source, d, {"plasma_eV", "damping_eV"});
      m.drude.push_back({number(source, d, "plasma_eV"), number_or(source, d, "damping_eV", 0.0)});
    }
  }
  if (!m.perfect() && m.oscillators.empty() && m.drude.empty())
    fail(source, node, "oscillators", "an oscillator-model material needs at least one oscillator or Drude term");
  try {
    m.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(where(source, node) + ": " + e.what());
  }
  return m;
}

}  // namespace

const MaterialModel& MaterialCatalog::find(std::string_view name) const {
  auto it = std::find_if(materials.begin(), materials.end(), [&](const auto& m) { return m.name == name; });
  if (it == materials.end()) {
    std::ostringstream msg;
    msg << "unknown material '" << name << "' (searched " << source << "; known:";
    for (const auto& m : materials) msg << ' ' << m.name;
    msg << ')';
    throw ConfigError(msg.str());
  }
  return *it;
}

bool MaterialCatalog::contains(std::string_view name) const {
  return std::any_of(materials.begin(), materials.end(), [&](const auto& m) { return m.name == name; });
}

MaterialCatalog parse_catalog(const std::string& yaml_text, const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  MaterialCatalog cat;
  cat.source = source_name;
  if (!root.IsMap()) throw ConfigError(source_name + ": expected a mapping with 'atom' and 'materials'");
  check_keys(source_name, root, {"atom", "materials"});

  cat.atom = AtomPolarizability::hydrogen();
  if (const auto atom = root["atom"]) {
    check_keys(source_name, atom, {"name", "static_polarizability_a0", "resonance_eV"});
    const double a0 = units::bohr_radius;
    cat.atom.static_nm3 = number_or(source_name, atom, "static_polarizability_a0", 4.5) * a0 * a0 * a0;
    cat.atom.resonance_eV = number(source_name, atom, "resonance_eV");
    if (!(cat.atom.static_nm3 > 0)) fail(source_name, atom, "static_polarizability_a0", "must be > 0");
    if (!(cat.atom.resonance_eV > 0)) fail(source_name, atom, "resonance_eV", "must be > 0");
  }

  const auto list = root["materials"];
  if (!list || !list.IsSequence()) throw ConfigError(source_name + ": 'materials' must be a list");
  for (const auto& node : list) {
    auto m = parse_material(source_name, node, cat.materials);
    if (cat.contains(m.name)) fail(source_name, node, "name", "duplicate material '" + m.name + "'");
    cat.materials.push_back(std::move(m));
  }
  return cat;
}

MaterialCatalog load_catalog(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read material catalog " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str(), file.string());
}

std::vector<std::filesystem::path> catalog_search_path() {
  std::vector<std::filesystem::path> out;
  if (const char* env = std::getenv(kMaterialsPathEnv); env && *env) {
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ':')) {
      if (item.empty()) continue;
      std::filesystem::path p(item);
      out.push_back(std::filesystem::is_directory(p) ? p / "materials.yaml" : p);
    }
  }
  out.emplace_back("materials.yaml");
  out.emplace_back("data/materials.yaml");
  out.push_back(std::filesystem::path(BADLANDS_DATA_DIR) / "materials.yaml");
  return out;
}

std::filesystem::path locate_catalog(const std::optional<std::filesystem::path>& explicit_file) {
  if (explicit_file) {
    if (!std::filesystem::exists(*explicit_file))
      throw ConfigError("material catalog not found: " + explicit_file->string());
    return *explicit_file;
  }
  std::string tried;
  for (const auto& p : catalog_search_path()) {
    if (std::filesystem::is_regular_file(p)) return p;
    tried += "\n  " + p.string();
  }
  throw ConfigError(std::string("no material catalog found; set ") + kMaterialsPathEnv + " or pass --config. Tried:" +
                    tried);
}

}  // namespace badlands
