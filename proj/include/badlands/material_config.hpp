#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "badlands/material.hpp"

namespace badlands {

/// Materials and the atomic polarizability read from a YAML catalog.
/// The schema is documented in data/materials.yaml.
struct MaterialCatalog {
  std::string source;  // file the catalog was read from
  AtomPolarizability atom;
  std::vector<MaterialModel> materials;  // file order

  /// Throws ConfigError naming the catalog file when `name` is unknown.
  const MaterialModel& find(std::string_view name) const;
  bool contains(std::string_view name) const;
};

MaterialCatalog parse_catalog(const std::string& yaml_text, const std::string& source_name);
MaterialCatalog load_catalog(const std::filesystem::path& file);

/// Environment variable holding a ':'-separated list of catalog files or
/// directories (searched for materials.yaml), consulted before the defaults.
inline constexpr const char* kMaterialsPathEnv = "BADLANDS_MATERIALS";

/// Candidate catalog locations in search order.
std::vector<std::filesystem::path> catalog_search_path();

/// First existing catalog along the search path, or `explicit_file` when
/// given. Throws ConfigError listing every location tried.
std::filesystem::path locate_catalog(const std::optional<std::filesystem::path>& explicit_file = {});

}  // namespace badlands
