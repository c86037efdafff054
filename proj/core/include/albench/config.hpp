#pragma once

#include <string>

#include "albench/protocol.hpp"

namespace albench {

// Sectioned key = value text ([experiment] and [bso]); '#' starts a comment.
// Errors carry file:line anchors.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");

std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace albench
