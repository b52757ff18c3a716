#pragma once

#include "hmdchan/synth.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmdchan::io
{

// Accepts a single scene object, {"scenes": [...]}, and/or
// {"random": {"seed", "positions", "scenarios", "scatterers"}}. A scene
// without "mpcs" gets image-method paths. Unknown keys are rejected.
std::vector<Scene> parse_scenes(std::string_view json_text);
std::vector<Scene> read_scenes(const std::filesystem::path &path);

// {"scenes": [...]} with explicit path lists.
std::string scenes_to_json(std::span<const Scene> scenes);

} // namespace hmdchan::io
