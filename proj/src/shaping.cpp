#include "sweeprl/shaping.hpp"

#include <cmath>

namespace sweeprl {

ShapedStep shaped_step(const StackState& stack, double tile_reward, double rotation_reward,
                       bool key_on_combined) {
  const double keyed = key_on_combined ? tile_reward + rotation_reward : tile_reward;
  StackState next = stack;
  next.stack = keyed >= 0.0 ? stack.stack + 1 : 0;
  const double bonus = std::pow(stack.base, static_cast<double>(next.stack));
  return {tile_reward + rotation_reward + bonus, next, bonus};
}

EpisodeVerdict elite_filter(long episode_length, bool done, long cap) {
  if (!done && episode_length >= cap) return {false, EpisodeEnd::Truncated};
  return {true, EpisodeEnd::Completed};
}

}  // namespace sweeprl
