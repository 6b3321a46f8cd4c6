#include "sweeprl/percept.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "sweeprl/error.hpp"

namespace sweeprl {

std::size_t local_observation_size(const ObservationConfig& cfg) {
  return kWindowSize + kDnutSize + (cfg.heading ? static_cast<std::size_t>(kNumHeadings) : 0);
}

std::size_t observation_size(const ObservationConfig& cfg, const GridMap& map) {
  if (cfg.mode == ObservationMode::Global) return map.size() * 3;
  return local_observation_size(cfg);
}

std::array<double, kWindowSize> local_window(const AgentState& state, const GridMap& map) {
  std::array<double, kWindowSize> w{};
  for (int k = 0; k < kNumHeadings; ++k)
    w[static_cast<std::size_t>(k)] =
        prospective_tile_reward(map, state, neighbor(state.pos, heading_from_index(k))) / 2.0;
  return w;
}

std::optional<NearestUncleaned> nearest_uncleaned(const AgentState& state, const GridMap& map) {
  if (state.uncleaned == 0) return std::nullopt;

  // Called once per environment step, so the scratch space is reused.
  thread_local std::vector<std::int32_t> dist;
  thread_local std::vector<std::uint32_t> frontier;
  thread_local std::vector<std::uint32_t> next;
  dist.assign(map.size(), -1);
  frontier.clear();

  const auto origin = static_cast<std::uint32_t>(map.index(state.pos));
  dist[origin] = 0;
  frontier.push_back(origin);
  for (int d = 1; !frontier.empty(); ++d) {
    next.clear();
    std::uint32_t best = UINT32_MAX;
    for (const std::uint32_t idx : frontier) {
      const Cell c = map.cell_at(idx);
      for (int k = 0; k < kNumHeadings; ++k) {
        const Cell n = neighbor(c, heading_from_index(k));
        if (!map.is_free(n)) continue;
        const auto ni = static_cast<std::uint32_t>(map.index(n));
        if (dist[ni] >= 0) continue;
        dist[ni] = d;
        next.push_back(ni);
        // Row-major order equals index order.
        if (!state.cleaned[ni]) best = std::min(best, ni);
      }
    }
    if (best != UINT32_MAX) {
      const Cell t = map.cell_at(best);
      return NearestUncleaned{t.row - state.pos.row, t.col - state.pos.col, d};
    }
    frontier.swap(next);
  }
  // Remaining uncleaned cells are unreachable.
  return std::nullopt;
}

std::array<double, kDnutSize> dnut_features(const std::optional<NearestUncleaned>& nearest) {
  if (!nearest) return {0.0, 0.0, 0.0};
  const double dx = nearest->dc;
  const double dy = nearest->dr;
  const double norm = std::hypot(dx, dy);
  return {dx / norm, dy / norm,
          static_cast<double>(std::min(nearest->distance, kDnutDistanceSaturation)) /
              kDnutDistanceSaturation};
}

void encode(const AgentState& state, const GridMap& map, const ObservationConfig& cfg,
            std::span<double> out) {
  if (out.size() != observation_size(cfg, map))
    throw Error(ErrorCode::ShapeMismatch, "observation buffer has wrong length");

  if (cfg.mode == ObservationMode::Global) {
    const double w = map.width();
    const double h = map.height();
    std::size_t o = 0;
    for (int r = 0; r < map.height(); ++r) {
      for (int c = 0; c < map.width(); ++c) {
        out[o++] = (c - state.pos.col) / w;
        out[o++] = (r - state.pos.row) / h;
        out[o++] = prospective_tile_reward(map, state, {r, c}) / 2.0;
      }
    }
    return;
  }

  const auto window = local_window(state, map);
  std::copy(window.begin(), window.end(), out.begin());
  auto dnut = std::array<double, kDnutSize>{};
  if (cfg.dnut) dnut = dnut_features(nearest_uncleaned(state, map));
  std::copy(dnut.begin(), dnut.end(), out.begin() + kWindowSize);
  if (cfg.heading) {
    auto onehot = out.subspan(kWindowSize + kDnutSize, kNumHeadings);
    std::fill(onehot.begin(), onehot.end(), 0.0);
    onehot[static_cast<std::size_t>(index_of(state.heading))] = 1.0;
  }
}

std::vector<double> encode(const AgentState& state, const GridMap& map,
                           const ObservationConfig& cfg) {
  std::vector<double> out(observation_size(cfg, map));
  encode(state, map, cfg, out);
  return out;
}

}  // namespace sweeprl
