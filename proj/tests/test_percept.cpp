#include <doctest.h>

#include <climits>
#include <cmath>

#include "sweeprl/error.hpp"
#include "sweeprl/percept.hpp"
#include "sweeprl/rng.hpp"

using namespace sweeprl;

namespace {

void mark_cleaned(const GridMap& m, AgentState& s, Cell c) {
  auto& f = s.cleaned[m.index(c)];
  if (!f) {
    f = 1;
    --s.uncleaned;
  }
}

AgentState all_cleaned_except(const GridMap& m, Cell pos, std::initializer_list<Cell> keep) {
  AgentState s = reset_at(m, pos, Heading::E);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Cell c = m.cell_at(i);
    bool kept = false;
    for (Cell k : keep) kept = kept || k == c;
    if (m.is_free(c) && !kept) mark_cleaned(m, s, c);
  }
  return s;
}

// Shortest 8-connected paths by relaxing every cell until nothing changes,
// then the smallest distance and, among ties, the first cell in row-major scan.
std::optional<NearestUncleaned> oracle(const AgentState& s, const GridMap& m) {
  std::vector<int> d(m.size(), INT_MAX);
  d[m.index(s.pos)] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int r = 0; r < m.height(); ++r)
      for (int c = 0; c < m.width(); ++c) {
        if (!m.is_free({r, c})) continue;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const Cell n{r + dr, c + dc};
            if ((dr == 0 && dc == 0) || !m.is_free(n) || d[m.index(n)] == INT_MAX) continue;
            if (d[m.index(n)] + 1 < d[m.index({r, c})]) {
              d[m.index({r, c})] = d[m.index(n)] + 1;
              changed = true;
            }
          }
      }
  }
  std::optional<NearestUncleaned> best;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) {
      const Cell x{r, c};
      if (!m.is_free(x) || s.is_cleaned(m, x) || d[m.index(x)] == INT_MAX) continue;
      if (!best || d[m.index(x)] < best->distance)
        best = NearestUncleaned{r - s.pos.row, c - s.pos.col, d[m.index(x)]};
    }
  return best;
}

GridMap random_map(Rng& rng, int w, int h, double wall_p) {
  std::vector<CellKind> cells(static_cast<std::size_t>(w * h));
  for (auto& k : cells) k = rng.uniform() < wall_p ? CellKind::Obstacle : CellKind::Free;
  cells[rng.below(cells.size())] = CellKind::Free;
  return GridMap(w, h, cells);
}

}  // namespace

TEST_CASE("local window") {
  const GridMap m = GridMap::empty(5, 5);
  SUBCASE("corner sees five walls") {
    const auto w = local_window(reset(m, 0), m);
    // N NE E SE S SW W NW
    CHECK(w == std::array<double, 8>{-1, -1, 0, 0, 0, -1, -1, -1});
  }
  SUBCASE("open interior") {
    const auto w = local_window(reset_at(m, {2, 2}, Heading::E), m);
    for (double v : w) CHECK(v == 0.0);
  }
  SUBCASE("cleaned neighbour to the east matches the step reward") {
    AgentState s = reset_at(m, {2, 2}, Heading::E);
    mark_cleaned(m, s, {2, 3});
    const auto w = local_window(s, m);
    CHECK(w[index_of(Heading::E)] == -0.5);
    for (int k = 0; k < 8; ++k) {
      AgentState probe = s;
      const auto o = step(m, probe, heading_from_index(k));
      CHECK(w[static_cast<std::size_t>(k)] == o.tile_reward / 2.0);
    }
  }
}

TEST_CASE("nearest uncleaned examples") {
  const GridMap m = GridMap::empty(9, 9);
  auto one = all_cleaned_except(m, {3, 5}, {{6, 3}});
  CHECK(nearest_uncleaned(one, m) == NearestUncleaned{3, -2, 3});

  auto none = all_cleaned_except(m, {3, 5}, {});
  CHECK_FALSE(nearest_uncleaned(none, m).has_value());
  CHECK(dnut_features(nearest_uncleaned(none, m)) == std::array<double, 3>{0, 0, 0});

  auto tie = all_cleaned_except(m, {4, 4}, {{3, 4}, {4, 5}});
  CHECK(nearest_uncleaned(tie, m) == NearestUncleaned{-1, 0, 1});
}

TEST_CASE("nearest uncleaned is unreachable behind a wall") {
  // Column 2 is solid wall; the only uncleaned cell is on the far side.
  std::vector<CellKind> cells(15, CellKind::Free);
  for (int r = 0; r < 3; ++r) cells[static_cast<std::size_t>(r * 5 + 2)] = CellKind::Obstacle;
  const GridMap m(5, 3, cells);
  const auto s = all_cleaned_except(m, {0, 0}, {{1, 4}});
  CHECK_FALSE(nearest_uncleaned(s, m).has_value());
}

TEST_CASE("nearest uncleaned matches a relaxation oracle on random maps") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = 2 + static_cast<int>(rng.below(9)), h = 2 + static_cast<int>(rng.below(9));
    const GridMap m = random_map(rng, w, h, 0.3);
    std::vector<Cell> free;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.is_free(m.cell_at(i))) free.push_back(m.cell_at(i));
    AgentState s = reset_at(m, free[rng.below(free.size())], Heading::E);
    for (Cell c : free)
      if (rng.uniform() < 0.7) mark_cleaned(m, s, c);
    CAPTURE(trial);
    CHECK(nearest_uncleaned(s, m) == oracle(s, m));
  }
}

TEST_CASE("dnut features") {
  const auto f = dnut_features(NearestUncleaned{3, -4, 4});
  CHECK(f[0] == doctest::Approx(-0.8));
  CHECK(f[1] == doctest::Approx(0.6));
  CHECK(f[2] == doctest::Approx(0.1));
  CHECK(dnut_features(NearestUncleaned{0, 60, 60})[2] == 1.0);
}

TEST_CASE("observation sizes") {
  Rng rng(5);
  const ObservationConfig local;
  for (int i = 0; i < 30; ++i) {
    const int w = 3 + static_cast<int>(rng.below(48)), h = 3 + static_cast<int>(rng.below(48));
    const GridMap m = random_map(rng, w, h, 0.2);
    CHECK(encode(reset(m, 0), m, local).size() == 19);
  }
  const GridMap m5 = GridMap::empty(5, 5);
  ObservationConfig global;
  global.mode = ObservationMode::Global;
  CHECK(encode(reset(m5, 0), m5, global).size() == 75);
  ObservationConfig headless;
  headless.heading = false;
  CHECK(encode(reset(m5, 0), m5, headless).size() == 11);

  std::vector<double> wrong(18);
  CHECK_THROWS_AS(encode(reset(m5, 0), m5, local, wrong), Error);
}

TEST_CASE("encoded layouts") {
  const GridMap m = GridMap::empty(5, 5);
  AgentState s = reset_at(m, {2, 2}, Heading::SW);
  mark_cleaned(m, s, {0, 0});

  const auto o = encode(s, m, ObservationConfig{});
  CHECK(o[8] == doctest::Approx(-std::sqrt(0.5)));  // toward (1, 1)
  CHECK(o[9] == doctest::Approx(-std::sqrt(0.5)));
  CHECK(o[10] == doctest::Approx(1.0 / 40));
  for (int k = 0; k < 8; ++k) CHECK(o[11 + static_cast<std::size_t>(k)] == (k == index_of(Heading::SW) ? 1.0 : 0.0));

  ObservationConfig ablated;
  ablated.dnut = false;
  const auto a = encode(s, m, ablated);
  CHECK(a.size() == 19);
  CHECK(a[8] == 0.0);
  CHECK(a[9] == 0.0);
  CHECK(a[10] == 0.0);

  ObservationConfig global;
  global.mode = ObservationMode::Global;
  const auto g = encode(s, m, global);
  CHECK(g[0] == doctest::Approx(-0.4));  // tile (0, 0): x, y, r
  CHECK(g[1] == doctest::Approx(-0.4));
  CHECK(g[2] == -0.5);
  const std::size_t self = 3 * 12;
  CHECK(g[self] == 0.0);
  CHECK(g[self + 1] == 0.0);
  CHECK(g[self + 2] == -0.5);
  CHECK(g[3 * 13 + 2] == 0.0);
}
