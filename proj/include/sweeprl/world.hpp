#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace sweeprl {

struct Cell {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;  // row-major
};

enum class CellKind : std::uint8_t { Free, Obstacle };

/// Compass octants, clockwise from north. North is row - 1, east is col + 1.
enum class Heading : std::uint8_t { N = 0, NE, E, SE, S, SW, W, NW };

inline constexpr int kNumHeadings = 8;

constexpr Heading heading_from_index(int k) { return static_cast<Heading>(k & 7); }
constexpr int index_of(Heading h) { return static_cast<int>(h); }
constexpr bool is_diagonal(Heading h) { return (index_of(h) & 1) != 0; }

constexpr Cell offset(Heading h) {
  constexpr std::array<Cell, 8> kOffsets{{{-1, 0}, {-1, 1}, {0, 1}, {1, 1},
                                          {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};
  return kOffsets[static_cast<std::size_t>(index_of(h))];
}

constexpr Cell neighbor(Cell c, Heading h) {
  const Cell d = offset(h);
  return {c.row + d.row, c.col + d.col};
}

inline constexpr double kDefaultTileSide = 0.5;
inline constexpr double kTileReward = 0.0;
inline constexpr double kCleanedReward = -1.0;
inline constexpr double kObstacleReward = -2.0;
inline constexpr double kRotationRewardPerUnit = -0.5;

/// Rectangular occupancy grid. Everything outside the rectangle is wall.
class GridMap {
 public:
  /// Throws Error(InvalidMap) when the dimensions or start are invalid and
  /// Error(NoFreeCell) when no cell is Free.
  GridMap(int width, int height, std::vector<CellKind> cells,
          std::optional<Cell> start = std::nullopt, double tile_side = kDefaultTileSide);

  static GridMap empty(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double tile_side() const noexcept { return tile_side_; }
  const std::optional<Cell>& start() const noexcept { return start_; }

  bool in_bounds(Cell c) const noexcept {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  CellKind kind(Cell c) const noexcept {
    return in_bounds(c) ? cells_[index(c)] : CellKind::Obstacle;
  }
  bool is_free(Cell c) const noexcept { return kind(c) == CellKind::Free; }

  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t i) const noexcept {
    return {static_cast<int>(i / static_cast<std::size_t>(width_)),
            static_cast<int>(i % static_cast<std::size_t>(width_))};
  }
  std::size_t size() const noexcept { return cells_.size(); }
  std::size_t free_count() const noexcept { return free_count_; }

  /// map.start if present, else the first Free cell in row-major order.
  Cell default_start() const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_;
  int height_;
  std::vector<CellKind> cells_;
  std::optional<Cell> start_;
  double tile_side_;
  std::size_t free_count_ = 0;
};

struct RotationCost {
  int units;      // 45 degree increments along the shorter arc, 0..4
  double reward;  // -0.5 per unit
};

RotationCost rotation_cost(Heading from, Heading to);

struct AgentState {
  Cell pos;
  Heading heading = Heading::E;
  std::vector<std::uint8_t> cleaned;  // per map cell, row-major
  std::size_t uncleaned = 0;          // Free cells not yet cleaned
  long steps = 0;
  double episode_base_reward = 0.0;
  long episode_rotation_units = 0;
  double episode_distance = 0.0;
  long axis_moves = 0;
  long diagonal_moves = 0;
  long blocked_moves = 0;
  std::uint64_t seed = 0;

  bool is_cleaned(const GridMap& map, Cell c) const {
    return map.in_bounds(c) && cleaned[map.index(c)] != 0;
  }
};

struct StepOutcome {
  double tile_reward = 0.0;
  double rotation_reward = 0.0;
  bool moved = false;
  Cell new_pos;
  bool done = false;
  double distance_delta = 0.0;
  int rotation_units = 0;

  double base_reward() const { return tile_reward + rotation_reward; }
};

/// Tile reward the agent would receive entering `target` from `state`.
double prospective_tile_reward(const GridMap& map, const AgentState& state, Cell target);

/// Fresh episode at map.default_start() facing east; the start cell counts as
/// cleaned. The seed is recorded only; the dynamics are deterministic.
AgentState reset(const GridMap& map, std::uint64_t rng_seed);

/// Fresh episode at an explicit pose. `pos` must be Free.
AgentState reset_at(const GridMap& map, Cell pos, Heading heading, std::uint64_t rng_seed = 0);

/// Turn to `action` (paying the rotation cost even when blocked), then try to
/// advance one cell. Throws Error(EpisodeFinished) once every Free cell is clean.
StepOutcome step(const GridMap& map, AgentState& state, Heading action);

inline bool is_done(const AgentState& state) { return state.uncleaned == 0; }

double coverage(const GridMap& map, const AgentState& state);

/// Map plus live episode state.
class CleaningEnv {
 public:
  explicit CleaningEnv(GridMap map) : map_(std::move(map)), state_(sweeprl::reset(map_, 0)) {}

  const AgentState& reset(std::uint64_t seed) { return state_ = sweeprl::reset(map_, seed); }
  const AgentState& reset_at(Cell pos, Heading heading, std::uint64_t seed = 0) {
    return state_ = sweeprl::reset_at(map_, pos, heading, seed);
  }
  StepOutcome step(Heading action) { return sweeprl::step(map_, state_, action); }
  bool done() const { return is_done(state_); }

  const GridMap& map() const noexcept { return map_; }
  const AgentState& state() const noexcept { return state_; }

 private:
  GridMap map_;
  AgentState state_;
};

}  // namespace sweeprl
