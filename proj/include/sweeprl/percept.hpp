#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "sweeprl/world.hpp"

namespace sweeprl {

enum class ObservationMode { Local, Global };

struct ObservationConfig {
  ObservationMode mode = ObservationMode::Local;
  /// When false the nearest-uncleaned features are present but zeroed, so
  /// ablated and full agents share one network shape.
  bool dnut = true;
  /// When false the heading one-hot is dropped (11-feature layout).
  bool heading = true;

  friend bool operator==(const ObservationConfig&, const ObservationConfig&) = default;
};

inline constexpr std::size_t kWindowSize = 8;
inline constexpr std::size_t kDnutSize = 3;
inline constexpr std::size_t kLocalObservationSize = kWindowSize + kDnutSize + kNumHeadings;  // 19
inline constexpr int kDnutDistanceSaturation = 40;

/// Observation length; independent of the map in Local mode.
std::size_t observation_size(const ObservationConfig& cfg, const GridMap& map);
std::size_t local_observation_size(const ObservationConfig& cfg);

/// Prospective tile reward of each octant neighbour, N first, divided by 2.
std::array<double, kWindowSize> local_window(const AgentState& state, const GridMap& map);

struct NearestUncleaned {
  int dr;
  int dc;
  int distance;  // 8-connected BFS steps over Free cells

  friend bool operator==(const NearestUncleaned&, const NearestUncleaned&) = default;
};

/// BFS from the agent over Free cells with 8-connected moves. Among the
/// uncleaned cells at minimum distance the row-major smallest wins.
std::optional<NearestUncleaned> nearest_uncleaned(const AgentState& state, const GridMap& map);

/// Unit direction (x = column, y = row) plus min(d, 40) / 40; all zero when
/// nothing is left to clean.
std::array<double, kDnutSize> dnut_features(const std::optional<NearestUncleaned>& nearest);

/// Writes the observation into `out`, which must have observation_size()
/// entries. Local: window, dnut, heading one-hot. Global: (x, y, r) per tile
/// with x, y the tile offset from the agent scaled by the map size.
void encode(const AgentState& state, const GridMap& map, const ObservationConfig& cfg,
            std::span<double> out);

std::vector<double> encode(const AgentState& state, const GridMap& map,
                           const ObservationConfig& cfg);

}  // namespace sweeprl
