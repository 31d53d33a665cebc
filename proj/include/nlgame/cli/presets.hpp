#pragma once

#include <string>
#include <vector>

#include "nlgame/cli/config.hpp"

namespace nlgame::cli {

/// Names accepted by preset().
std::vector<std::string> preset_names();

/// Built-in experiment configs (exp1, exp2, exp3, propagation). Throws
/// ConfigError for an unknown name.
RunConfig preset(const std::string& name);

/// Free-text notes shipped in the manifest for a preset (may be empty).
std::vector<std::string> preset_notes(const std::string& name);

}  // namespace nlgame::cli
