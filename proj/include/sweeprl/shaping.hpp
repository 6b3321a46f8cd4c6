#pragma once

#include <cstdint>

namespace sweeprl {

inline constexpr double kDefaultStackBase = 1.5;
inline constexpr long kDefaultEliteCap = 500;

/// Run length of consecutive non-negative keyed rewards.
struct StackState {
  std::uint32_t stack = 0;
  double base = kDefaultStackBase;
};

struct ShapingConfig {
  bool enabled = true;
  double base = kDefaultStackBase;
  /// Key the streak on tile + rotation reward instead of the tile reward alone.
  bool key_on_combined = false;
};

struct ShapedStep {
  double shaped;  // tile + rotation + bonus
  StackState next;
  double bonus;
};

/// A non-negative keyed reward extends the streak and pays base^(stack + 1);
/// a negative one resets the streak and pays base^0 = 1.
ShapedStep shaped_step(const StackState& stack, double tile_reward, double rotation_reward,
                       bool key_on_combined = false);

enum class EpisodeEnd { Completed, Truncated };

struct EpisodeVerdict {
  bool kept;
  EpisodeEnd reason;
};

/// An episode that hit the step cap without finishing is discarded from
/// training; everything else is kept.
EpisodeVerdict elite_filter(long episode_length, bool done, long cap = kDefaultEliteCap);

}  // namespace sweeprl
