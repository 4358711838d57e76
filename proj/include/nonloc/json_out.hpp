#pragma once

#include <string>

#include <json.hpp>

namespace nonloc {

/// Pretty-printed JSON with every floating-point value at 17 significant
/// digits. Non-finite numbers become null. Keys keep insertion order only if
/// the json was built as nlohmann::ordered_json.
std::string dump_json(const nlohmann::ordered_json& j);

void write_json_file(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace nonloc
