#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sweeprl/world.hpp"

namespace sweeprl {

/// One row per line: '.' Free, '#' Obstacle, 'S' Free start cell (at most
/// one). Trailing blank lines and CR characters are ignored.
/// Errors: Empty, RaggedRows, UnknownChar, MultipleStarts (and InvalidMap /
/// NoFreeCell from GridMap).
GridMap parse_map(std::string_view text);

/// Inverse of parse_map; LF line endings, trailing newline.
std::string render_map(const GridMap& map);

GridMap load_map(const std::filesystem::path& path);

}  // namespace sweeprl
