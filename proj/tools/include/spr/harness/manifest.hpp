#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace spr::harness {

// Hex SHA-1 of "blob <size>\0" + content, the object id git assigns.
std::string git_blob_hash(const std::string& content);

// Writes `csv` to `csv_path` and a manifest (spec echo, content hash,
// summary) next to it as <csv_path>.manifest.json. Returns the manifest.
nlohmann::json write_results(const std::string& csv_path, const std::string& csv,
                             const nlohmann::json& spec, const nlohmann::json& summary);

}  // namespace spr::harness
