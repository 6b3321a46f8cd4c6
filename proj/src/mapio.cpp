#include "sweeprl/mapio.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "sweeprl/error.hpp"

namespace sweeprl {

GridMap parse_map(std::string_view text) {
  std::vector<std::string_view> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(line);
    pos = end + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw Error(ErrorCode::Empty, "map text has no rows");

  const std::size_t width = rows.front().size();
  std::vector<CellKind> cells;
  cells.reserve(width * rows.size());
  std::optional<Cell> start;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(r) + " has length " +
                                             std::to_string(rows[r].size()) + ", expected " +
                                             std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      switch (rows[r][c]) {
        case '.': cells.push_back(CellKind::Free); break;
        case '#': cells.push_back(CellKind::Obstacle); break;
        case 'S':
          if (start) throw Error(ErrorCode::MultipleStarts, "more than one 'S' in map");
          start = Cell{static_cast<int>(r), static_cast<int>(c)};
          cells.push_back(CellKind::Free);
          break;
        default:
          throw Error(ErrorCode::UnknownChar, std::string("unexpected character '") +
                                                  rows[r][c] + "' at row " + std::to_string(r) +
                                                  ", column " + std::to_string(c));
      }
    }
  }
  return GridMap(static_cast<int>(width), static_cast<int>(rows.size()), std::move(cells), start);
}

std::string render_map(const GridMap& map) {
  std::string out;
  out.reserve(map.size() + static_cast<std::size_t>(map.height()));
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const Cell cell{r, c};
      if (map.start() && *map.start() == cell)
        out += 'S';
      else
        out += map.is_free(cell) ? '.' : '#';
    }
    out += '\n';
  }
  return out;
}

GridMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open map file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

}  // namespace sweeprl
