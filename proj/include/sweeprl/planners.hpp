#pragma once

#include <vector>

#include "sweeprl/rng.hpp"
#include "sweeprl/world.hpp"

namespace sweeprl {

enum class PlannerKind { Random, Zigzag };

/// Keep going straight while the cell ahead is Free; otherwise draw uniform
/// headings until one points at a Free cell. Throws Error(Trapped) when no
/// octant is Free.
Heading random_step(const AgentState& state, const GridMap& map, Rng& rng);

/// Serpentine sweep from map.default_start(): row 0 left to right, down one
/// row, back right to left, and so on. Cells already covered are skipped and
/// the next uncovered cell in sweep order is reached by the shortest
/// 4-connected detour (8-connected if only that exists). On an empty W x H map
/// this is a Hamiltonian path of W*H - 1 axis moves. Throws
/// Error(Unreachable) when some Free cell cannot be reached.
std::vector<Heading> zigzag_plan(const GridMap& map);

/// Same sweep from an explicit start cell.
std::vector<Heading> zigzag_plan_from(const GridMap& map, Cell start);

}  // namespace sweeprl
