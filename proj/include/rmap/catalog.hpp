#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rmap {

struct CatalogEntry {
  std::string name;
  std::string description;
  std::string text;  // scenario file content
};

// Built-in example scenarios, identical to the files shipped under
// scenarios/.
const std::vector<CatalogEntry>& catalog();

const CatalogEntry* find_catalog_entry(const std::string& name);

}  // namespace rmap
