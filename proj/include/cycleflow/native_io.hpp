#pragma once

#include <filesystem>
#include <string>

#include "cycleflow/grid.hpp"

namespace cycleflow {

/// Parse the native JSON grid format:
///   { "name": str, "slack": int, "buses": [int],
///     "branches": [{"from": int, "to": int, "x": float}] }
/// "slack", "from" and "to" are external bus ids. Unknown keys are rejected.
Grid load_native(const std::string& json_text);

/// Serialize to the native JSON format. load_native(save_native(g)) == g.
std::string save_native(const Grid& grid);

/// Load a grid file, dispatching on extension: ".json" -> native format,
/// anything else -> MATPOWER case text.
Grid load_grid_file(const std::filesystem::path& path);

}  // namespace cycleflow
