#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace usot {

using Json = nlohmann::ordered_json;

/// Compact single-line JSON; reals use 17 significant digits so they
/// round-trip exactly, non-finite reals become null.
std::string dump_json(const Json& value);

/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace usot
