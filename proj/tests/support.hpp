#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "badlands/casimir_polder.hpp"
#include "badlands/material_config.hpp"

namespace badlands::testing {

inline const MaterialCatalog& catalog() {
  static const MaterialCatalog c = load_catalog(locate_catalog());
  return c;
}

/// Default-range table for a catalog material, built once per process.
inline std::shared_ptr<const PotentialTable> table_for(const std::string& name) {
  static std::mutex guard;
  static std::map<std::string, std::shared_ptr<const PotentialTable>> cache;
  std::lock_guard lock(guard);
  auto& slot = cache[name];
  if (!slot) slot = std::make_shared<PotentialTable>(build_potential_table(catalog().find(name), catalog().atom));
  return slot;
}

}  // namespace badlands::testing
