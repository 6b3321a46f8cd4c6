#include "sweeprl/world.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sweeprl/error.hpp"

namespace sweeprl {

GridMap::GridMap(int width, int height, std::vector<CellKind> cells, std::optional<Cell> start,
                 double tile_side)
    : width_(width), height_(height), cells_(std::move(cells)), start_(start),
      tile_side_(tile_side) {
  if (width_ < 2 || height_ < 2)
    throw Error(ErrorCode::InvalidMap, "map must be at least 2x2, got " + std::to_string(width_) +
                                           "x" + std::to_string(height_));
  if (cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
    throw Error(ErrorCode::InvalidMap, "cell count does not match dimensions");
  if (!(tile_side_ > 0.0)) throw Error(ErrorCode::InvalidMap, "tile side must be positive");
  free_count_ = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), CellKind::Free));
  if (free_count_ == 0) throw Error(ErrorCode::NoFreeCell, "map has no free cell");
  if (start_ && !is_free(*start_))
    throw Error(ErrorCode::InvalidMap, "start cell is not free");
}

GridMap GridMap::empty(int width, int height) {
  return GridMap(width, height,
                 std::vector<CellKind>(static_cast<std::size_t>(std::max(width, 0)) *
                                           static_cast<std::size_t>(std::max(height, 0)),
                                       CellKind::Free));
}

Cell GridMap::default_start() const {
  if (start_) return *start_;
  const auto it = std::find(cells_.begin(), cells_.end(), CellKind::Free);
  return cell_at(static_cast<std::size_t>(it - cells_.begin()));
}

RotationCost rotation_cost(Heading from, Heading to) {
  const int diff = (index_of(to) - index_of(from) + 8) % 8;
  const int units = std::min(diff, 8 - diff);
  return {units, kRotationRewardPerUnit * units};
}

double prospective_tile_reward(const GridMap& map, const AgentState& state, Cell target) {
  if (!map.is_free(target)) return kObstacleReward;
  return state.cleaned[map.index(target)] ? kCleanedReward : kTileReward;
}

AgentState reset_at(const GridMap& map, Cell pos, Heading heading, std::uint64_t rng_seed) {
  if (!map.is_free(pos)) throw Error(ErrorCode::InvalidMap, "start pose is not a free cell");
  AgentState s;
  s.pos = pos;
  s.heading = heading;
  s.cleaned.assign(map.size(), 0);
  s.cleaned[map.index(pos)] = 1;
  s.uncleaned = map.free_count() - 1;
  s.seed = rng_seed;
  return s;
}

AgentState reset(const GridMap& map, std::uint64_t rng_seed) {
  return reset_at(map, map.default_start(), Heading::E, rng_seed);
}

StepOutcome step(const GridMap& map, AgentState& state, Heading action) {
  if (is_done(state)) throw Error(ErrorCode::EpisodeFinished, "step() called after done");

  StepOutcome out;
  const RotationCost rot = rotation_cost(state.heading, action);
  out.rotation_units = rot.units;
  out.rotation_reward = rot.reward;
  state.heading = action;

  const Cell target = neighbor(state.pos, action);
  out.tile_reward = prospective_tile_reward(map, state, target);
  if (map.is_free(target)) {
    out.moved = true;
    state.pos = target;
    auto& flag = state.cleaned[map.index(target)];
    if (!flag) {
      flag = 1;
      --state.uncleaned;
    }
    if (is_diagonal(action)) {
      out.distance_delta = map.tile_side() * std::sqrt(2.0);
      ++state.diagonal_moves;
    } else {
      out.distance_delta = map.tile_side();
      ++state.axis_moves;
    }
  } else {
    ++state.blocked_moves;
  }
  out.new_pos = state.pos;
  out.done = is_done(state);

  ++state.steps;
  state.episode_base_reward += out.tile_reward;
  state.episode_base_reward += out.rotation_reward;
  state.episode_rotation_units += out.rotation_units;
  state.episode_distance += out.distance_delta;
  return out;
}

double coverage(const GridMap& map, const AgentState& state) {
  const auto total = static_cast<double>(map.free_count());
  return (total - static_cast<double>(state.uncleaned)) / total;
}

}  // namespace sweeprl
