#include "sweeprl/planners.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <optional>

#include "sweeprl/error.hpp"

namespace sweeprl {

Heading random_step(const AgentState& state, const GridMap& map, Rng& rng) {
  if (map.is_free(neighbor(state.pos, state.heading))) return state.heading;
  bool any_free = false;
  for (int k = 0; k < kNumHeadings; ++k)
    any_free = any_free || map.is_free(neighbor(state.pos, heading_from_index(k)));
  if (!any_free) throw Error(ErrorCode::Trapped, "no free cell around the agent");
  for (;;) {
    const Heading h = heading_from_index(static_cast<int>(rng.below(kNumHeadings)));
    if (map.is_free(neighbor(state.pos, h))) return h;
  }
}

namespace {

constexpr std::array<Heading, 4> kAxis{Heading::N, Heading::E, Heading::S, Heading::W};
constexpr std::array<Heading, 8> kAll{Heading::N, Heading::NE, Heading::E, Heading::SE,
                                      Heading::S, Heading::SW, Heading::W, Heading::NW};

// Shortest path as a heading sequence, or nullopt when unreachable.
template <std::size_t N>
std::optional<std::vector<Heading>> bfs_path(const GridMap& map, Cell from, Cell to,
                                             const std::array<Heading, N>& moves) {
  if (from == to) return std::vector<Heading>{};
  std::vector<int> via(map.size(), -1);  // heading used to enter, -1 = unvisited
  std::deque<Cell> queue{from};
  via[map.index(from)] = 8;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (const Heading h : moves) {
      const Cell n = neighbor(c, h);
      if (!map.is_free(n) || via[map.index(n)] >= 0) continue;
      via[map.index(n)] = index_of(h);
      if (n == to) {
        std::vector<Heading> path;
        for (Cell cur = to; cur != from;) {
          const Heading step = heading_from_index(via[map.index(cur)]);
          path.push_back(step);
          const Cell d = offset(step);
          cur = {cur.row - d.row, cur.col - d.col};
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Heading> zigzag_plan_from(const GridMap& map, Cell start) {
  if (!map.is_free(start)) throw Error(ErrorCode::InvalidMap, "zigzag start is not free");

  std::vector<Cell> order;
  order.reserve(map.free_count());
  for (int r = 0; r < map.height(); ++r) {
    for (int i = 0; i < map.width(); ++i) {
      const Cell c{r, r % 2 == 0 ? i : map.width() - 1 - i};
      if (map.is_free(c)) order.push_back(c);
    }
  }

  std::vector<std::uint8_t> covered(map.size(), 0);
  covered[map.index(start)] = 1;
  std::vector<Heading> plan;
  Cell pos = start;
  for (const Cell target : order) {
    if (covered[map.index(target)]) continue;
    auto path = bfs_path(map, pos, target, kAxis);
    if (!path) path = bfs_path(map, pos, target, kAll);
    if (!path)
      throw Error(ErrorCode::Unreachable, "cell (" + std::to_string(target.row) + ", " +
                                              std::to_string(target.col) + ") is unreachable");
    for (const Heading h : *path) {
      pos = neighbor(pos, h);
      covered[map.index(pos)] = 1;
      plan.push_back(h);
    }
  }
  return plan;
}

std::vector<Heading> zigzag_plan(const GridMap& map) {
  return zigzag_plan_from(map, map.default_start());
}

}  // namespace sweeprl
