// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance 1 4 9      run a subset
//   acceptance --fast     skip the two long training studies (10, 12)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "sweeprl/bench.hpp"
#include "sweeprl/planners.hpp"

using namespace sweeprl;

namespace {

// Pinned tolerances and thresholds.
constexpr double kExactTol = 0.0;
constexpr double kShapingTol = 1e-12;
constexpr double kClipTol = 1e-12;
constexpr double kGradRelTol = 1e-5;
constexpr std::size_t kGradCoords = 100;
constexpr double kZigzagDistance = 199.5;
constexpr long kZigzagRotation = 76;
constexpr long kZigzagSteps = 399;
constexpr double kRandomOverZigzag = 20.0;
constexpr double kMedianStepsMax = 35.0;
constexpr long kTrainEpisodes = 10000;
constexpr double kTransferCoverage = 0.95;
constexpr long kTransferCap = 3000;
constexpr int kSeedMajority = 4;  // out of 5
// Reward threshold: trailing 100-episode mean base reward at least this
// multiple of the Zigzag episode's base reward on the same map.
constexpr double kThresholdOverZigzag = 1.5;
constexpr long kCurveBudget5 = 3000;
constexpr long kCurveBudget7 = 5000;

const std::vector<std::uint64_t> kSeeds{0, 1, 2, 3, 4};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <typename T>
double median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? double(v[n / 2]) : 0.5 * (double(v[n / 2 - 1]) + double(v[n / 2]));
}

GridMap random_map(Rng& rng, int w, int h, double wall_p) {
  std::vector<CellKind> cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  for (auto& k : cells) k = rng.uniform() < wall_p ? CellKind::Obstacle : CellKind::Free;
  cells[rng.below(cells.size())] = CellKind::Free;
  return GridMap(w, h, cells);
}

std::vector<Cell> free_cells(const GridMap& m) {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.is_free(m.cell_at(i))) out.push_back(m.cell_at(i));
  return out;
}

TrainOptions all_ppo(std::uint64_t seed, long episodes) {
  TrainOptions o;
  o.algo = Algo::Ppo;
  o.seed = seed;
  o.episodes = episodes;
  return apply_variant(o, variant_all());
}

// Shared between criteria 9 and 11.
std::map<std::uint64_t, TrainResult>& trained_all() {
  static std::map<std::uint64_t, TrainResult> cache;
  return cache;
}

void train_all_seeds(const GridMap& room5, const std::vector<std::uint64_t>& seeds) {
  std::vector<std::uint64_t> todo;
  for (auto s : seeds)
    if (!trained_all().count(s)) todo.push_back(s);
  std::vector<TrainResult> results(todo.size());
  parallel_for(todo.size(), worker_count(),
               [&](std::size_t i) { results[i] = train(room5, all_ppo(todo[i], kTrainEpisodes)); });
  for (std::size_t i = 0; i < todo.size(); ++i) trained_all()[todo[i]] = std::move(results[i]);
}

// ---------------------------------------------------------------------------

Outcome reward_arithmetic() {
  long checked = 0, bad = 0;
  for (int from = 0; from < 8; ++from) {
    for (int to = 0; to < 8; ++to) {
      const int diff = std::abs(from - to);
      const double expect_rot = -0.5 * std::min(diff, 8 - diff);
      for (int state = 0; state < 3; ++state) {
        // Agent in the middle of a 5x5 room; the target cell is clean, dirty or wall.
        std::vector<CellKind> cells(25, CellKind::Free);
        const Cell target = neighbor({2, 2}, heading_from_index(to));
        if (state == 2) cells[static_cast<std::size_t>(target.row * 5 + target.col)] = CellKind::Obstacle;
        const GridMap m(5, 5, cells);
        AgentState s = reset_at(m, {2, 2}, heading_from_index(from));
        if (state == 1) {
          s.cleaned[m.index(target)] = 1;
          --s.uncleaned;
        }
        const auto o = step(m, s, heading_from_index(to));
        const double expect_tile = state == 0 ? 0.0 : state == 1 ? -1.0 : -2.0;
        ++checked;
        if (std::abs(o.tile_reward - expect_tile) > kExactTol ||
            std::abs(o.rotation_reward - expect_rot) > kExactTol ||
            std::abs(o.base_reward() - (expect_tile + expect_rot)) > kExactTol)
          ++bad;
      }
    }
  }
  const bool half_turn = rotation_cost(Heading::N, Heading::S).reward == -2.0 &&
                         rotation_cost(Heading::E, Heading::W).reward == -2.0;
  return {bad == 0 && half_turn, fmt("%ld/%ld heading x tile cases exact, 180 deg = -2.0: %s",
                                     checked - bad, checked, half_turn ? "yes" : "no")};
}

Outcome shaping_arithmetic() {
  StackState s;
  double bonus = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto r = shaped_step(s, 0.0, 0.0);
    bonus += r.bonus;
    s = r.next;
  }
  StackState t;
  double tile_total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto r = shaped_step(t, -1.0, 0.0);
    tile_total += r.shaped;
    t = r.next;
  }
  const bool ok = std::abs(bonus - 7.125) <= kShapingTol && std::abs(tile_total) <= kShapingTol;
  return {ok, fmt("streak bonus %.12f (want 7.125), revisit total %.12f (want 0)", bonus, tile_total)};
}

Outcome clipping_table() {
  struct Row {
    double r, a, e, want;
  };
  const Row rows[] = {{1.0, 2.0, 0.2, 2.0}, {1.5, 1.0, 0.2, 1.2}, {0.5, -1.0, 0.2, -0.8}};
  bool ok = true;
  for (const auto& row : rows) ok = ok && std::abs(clipped_term(row.r, row.a, row.e) - row.want) <= kClipTol;
  Rng rng(sub_seed(3, "acceptance"));
  long violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = rng.uniform(0.0, 3.0), a = rng.uniform(-10.0, 10.0), e = rng.uniform(0.01, 0.5);
    const double t = clipped_term(r, a, e);
    const double unclipped = r * a, clipped = std::clamp(r, 1 - e, 1 + e) * a;
    if (t > unclipped + kClipTol || t > clipped + kClipTol ||
        std::abs(t - std::min(unclipped, clipped)) > kClipTol)
      ++violations;
  }
  return {ok && violations == 0,
          fmt("table rows %s, min-bound violations %ld/10000", ok ? "exact" : "WRONG", violations)};
}

Outcome gradient_correctness() {
  Rng rng(sub_seed(4, "acceptance"));
  auto obs = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
  };

  Network ac(Architecture{19, {16, 16}, HeadLayout::ActorCritic, 8});
  ac.initialize(41, 1.0);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 16; ++i) xs.push_back(obs(19));
  std::vector<PpoSample> batch;
  Activations acts;
  std::vector<double> lp(8);
  for (const auto& x : xs) {
    ac.forward(x, acts);
    log_softmax(acts.heads[0], lp);
    const auto a = rng.below(8);
    batch.push_back({x, static_cast<int>(a), lp[a] + rng.uniform(-0.4, 0.4), rng.uniform(-2, 2),
                     rng.uniform(-1, 1)});
  }
  PpoConfig cfg;
  std::vector<double> g(ac.num_params(), 0.0), scratch(ac.num_params());
  ppo_loss(ac, batch, cfg, g);
  const auto ppo = testing::check_gradient(ac.params(), g, [&] { return ppo_loss(ac, batch, cfg, scratch).total; },
                                           kGradCoords, 1);

  double worst_dqn = 0.0;
  for (const HeadLayout layout : {HeadLayout::Q, HeadLayout::Dueling}) {
    Network q(Architecture{19, {16, 16}, layout, 8});
    q.initialize(43);
    std::vector<DqnBatchItem> items;
    for (std::size_t i = 0; i < xs.size(); ++i)
      items.push_back({xs[i], static_cast<int>(rng.below(8)), i % 2 ? rng.uniform(-0.5, 0.5) : rng.uniform(2, 4)});
    std::vector<double> gq(q.num_params(), 0.0), sq(q.num_params());
    dqn_loss(q, items, true, gq);
    const auto r = testing::check_gradient(q.params(), gq, [&] { return dqn_loss(q, items, true, sq); },
                                           kGradCoords, 2);
    worst_dqn = std::max(worst_dqn, r.max_rel_error);
  }
  return {ppo.max_rel_error <= kGradRelTol && worst_dqn <= kGradRelTol,
          fmt("max relative error: PPO %.2e, DQN Huber %.2e over %zu coordinates each (tol %.0e)",
              ppo.max_rel_error, worst_dqn, kGradCoords, kGradRelTol)};
}

Outcome observation_sizes() {
  Rng rng(sub_seed(5, "acceptance"));
  long bad = 0, maps = 0;
  ObservationConfig local, global;
  global.mode = ObservationMode::Global;
  for (int i = 0; i < 200; ++i) {
    const int w = 3 + static_cast<int>(rng.below(48)), h = 3 + static_cast<int>(rng.below(48));
    const GridMap m = random_map(rng, w, h, 0.2);
    const auto cells = free_cells(m);
    const AgentState s = reset_at(m, cells[rng.below(cells.size())], heading_from_index(int(rng.below(8))));
    ++maps;
    if (encode(s, m, local).size() != 19) ++bad;
    if (encode(s, m, global).size() != static_cast<std::size_t>(w * h * 3)) ++bad;
  }
  const GridMap m5 = GridMap::empty(5, 5);
  const std::size_t g5 = encode(reset(m5, 0), m5, global).size();
  return {bad == 0 && g5 == 75,
          fmt("%ld random maps 3x3..50x50: local always 19, global W*H*3; 5x5 global = %zu", maps, g5)};
}

// Dijkstra over an explicit adjacency list, independent of the library BFS.
std::optional<NearestUncleaned> dijkstra_oracle(const AgentState& s, const GridMap& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell c = m.cell_at(i);
    if (!m.is_free(c)) continue;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const Cell nb{c.row + dr, c.col + dc};
        if ((dr || dc) && m.is_free(nb)) adj[i].push_back(m.index(nb));
      }
  }
  std::vector<int> dist(n, INT32_MAX);
  using Item = std::pair<int, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[m.index(s.pos)] = 0;
  pq.push({0, m.index(s.pos)});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto v : adj[u])
      if (d + 1 < dist[v]) {
        dist[v] = d + 1;
        pq.push({d + 1, v});
      }
  }
  std::optional<std::pair<int, std::size_t>> best;
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.is_free(m.cell_at(i)) || s.cleaned[i] || dist[i] == INT32_MAX) continue;
    const std::pair<int, std::size_t> key{dist[i], i};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  const Cell t = m.cell_at(best->second);
  return NearestUncleaned{t.row - s.pos.row, t.col - s.pos.col, best->first};
}

Outcome dnut_oracle() {
  Rng rng(sub_seed(6, "acceptance"));
  int agree = 0, ties = 0, none = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    const int w = 2 + static_cast<int>(rng.below(9)), h = 2 + static_cast<int>(rng.below(9));
    const GridMap m = random_map(rng, w, h, rng.uniform(0.0, 0.4));
    const auto cells = free_cells(m);
    AgentState s = reset_at(m, cells[rng.below(cells.size())], Heading::E);
    const double clean_p = rng.uniform(0.3, 1.0);
    for (Cell c : cells)
      if (rng.uniform() < clean_p && !s.cleaned[m.index(c)]) {
        s.cleaned[m.index(c)] = 1;
        --s.uncleaned;
      }
    const auto got = nearest_uncleaned(s, m);
    const auto want = dijkstra_oracle(s, m);
    agree += got == want;
    none += !want.has_value();
    if (want) {
      int at_min = 0;
      for (Cell c : cells)
        if (!s.cleaned[m.index(c)] && std::max(std::abs(c.row - s.pos.row), std::abs(c.col - s.pos.col)) == want->distance)
          ++at_min;
      ties += at_min > 1;
    }
  }
  return {agree == trials,
          fmt("%d/%d maps agree (%d with distance ties, %d with nothing reachable)", agree, trials, ties, none)};
}

Outcome zigzag_determinism() {
  const GridMap m = GridMap::empty(20, 20);
  ZigzagController z;
  const auto a = run_episode(z, m, 0, ShapingConfig{}, 3000).metrics;
  const auto b = run_episode(z, m, 1, ShapingConfig{}, 3000).metrics;
  const bool ok = a.steps == kZigzagSteps && std::abs(a.distance_m - kZigzagDistance) <= kExactTol &&
                  a.rotation_units == kZigzagRotation && a.coverage == 1.0 &&
                  metrics_csv({a}) == metrics_csv({MetricsRecord{b.episode, b.steps, b.coverage, b.distance_m,
                                                                  b.rotation_units, b.base_reward, b.shaped_reward,
                                                                  b.wall_hits, a.seed}});
  return {ok, fmt("%ld moves, %.1f m, %ld rotation units, coverage %.3f", a.steps, a.distance_m,
                  a.rotation_units, a.coverage)};
}

Outcome random_vs_zigzag() {
  const GridMap m = GridMap::empty(20, 20);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  const auto rows = compare_baselines(m, seeds, nullptr);
  const double ratio = rows[0].distance_m / rows[1].distance_m;
  // Straight-until-blocked from a corner of a square room only ever runs
  // corner to corner, so Random usually stops at the step cap; report it.
  return {ratio > kRandomOverZigzag,
          fmt("Random %.1f m (mean of 10, %.0f steps, coverage %.3f%s) vs Zigzag %.1f m: %.1fx (need > %.0fx)",
              rows[0].distance_m, rows[0].steps, rows[0].coverage, rows[0].coverage < 1.0 ? ", step cap hit" : "",
              rows[1].distance_m, ratio, kRandomOverZigzag)};
}

constexpr int kEvalEpisodes = 10;

struct GreedyEval {
  double median_steps;     // greedy episodes from the map's start
  double coverage;         // worst coverage among them
  double any_start_median; // reported only: one episode per Free start cell
};

GreedyEval greedy_eval(const PolicyFile& policy, const GridMap& m) {
  NetworkController ctl(policy);
  std::vector<long> lengths;
  double coverage = 1.0;
  for (int e = 0; e < kEvalEpisodes; ++e) {
    const auto r = run_episode(ctl, m, static_cast<std::uint64_t>(e), ShapingConfig{}, kDefaultEliteCap).metrics;
    lengths.push_back(r.steps);
    coverage = std::min(coverage, r.coverage);
  }
  std::vector<long> any;
  for (Cell c : free_cells(m))
    any.push_back(run_episode(ctl, m, 0, ShapingConfig{}, kDefaultEliteCap, StartPose{c, Heading::E}).metrics.steps);
  return {median(lengths), coverage, median(any)};
}

Outcome desk_training() {
  const GridMap room5 = GridMap::empty(5, 5);
  train_all_seeds(room5, kSeeds);
  int passed = 0;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto e = greedy_eval(trained_all()[seed].policy, room5);
    const bool ok = e.median_steps <= kMedianStepsMax && e.coverage == 1.0;
    passed += ok;
    detail += fmt("%sseed %llu: %.0f steps cov %.2f (any-start median %.0f)", detail.empty() ? "" : "; ",
                  static_cast<unsigned long long>(seed), e.median_steps, e.coverage, e.any_start_median);
  }
  return {passed >= kSeedMajority, fmt("%d/5 seeds pass (", passed) + detail + ")"};
}

Outcome ablation_ordering() {
  const GridMap room5 = GridMap::empty(5, 5);
  ExperimentSpec spec;
  spec.episodes = kTrainEpisodes;
  spec.seeds = kSeeds;
  spec.base = all_ppo(0, kTrainEpisodes);
  const auto cells = run_ablation(spec, room5);
  std::map<std::uint64_t, std::map<std::string, double>> table;
  for (const auto& c : cells) table[c.seed][c.variant] = c.final_mean_steps;
  int passed = 0;
  std::string detail;
  for (auto& [seed, v] : table) {
    const double all = v["all"], plain = v["plain"];
    bool ok = true;
    for (const char* name : {"no_dnut", "no_rs", "no_es"}) ok = ok && all <= v[name] && plain >= v[name];
    ok = ok && plain >= all;
    passed += ok;
    detail += fmt("%sseed %llu: all %.1f -dnut %.1f -rs %.1f -es %.1f plain %.1f", detail.empty() ? "" : "; ",
                  static_cast<unsigned long long>(seed), all, v["no_dnut"], v["no_rs"], v["no_es"], plain);
  }
  return {passed >= kSeedMajority, fmt("%d/5 seeds ordered (", passed) + detail + ")"};
}

Outcome transfer() {
  const GridMap room5 = GridMap::empty(5, 5);
  train_all_seeds(room5, {0});
  const auto m = run_transfer(trained_all()[0].policy, GridMap::empty(20, 20), kTransferCap);
  return {m.coverage >= kTransferCoverage,
          fmt("seed-0 policy on empty 20x20: coverage %.4f in %ld steps (need >= %.2f within %ld)", m.coverage,
              m.steps, kTransferCoverage, kTransferCap)};
}

TrainOptions curve_options(Algo algo, std::uint64_t seed, long episodes, ObservationMode mode) {
  TrainOptions o;
  o.algo = algo;
  o.seed = seed;
  o.episodes = episodes;
  o.observation.mode = mode;
  o.observation.dnut = mode == ObservationMode::Local;
  o.shaping.enabled = false;
  o.elite = true;
  return o;
}

Outcome learning_curves() {
  const GridMap room5 = GridMap::empty(5, 5), room7 = GridMap::empty(7, 7);
  auto threshold = [](const GridMap& m) {
    ZigzagController z;
    return kThresholdOverZigzag * run_episode(z, m, 0, ShapingConfig{}, 100000).metrics.base_reward;
  };
  const double thr5 = threshold(room5), thr7 = threshold(room7);
  struct Job {
    const GridMap* map;
    Algo algo;
    ObservationMode mode;
    std::uint64_t seed;
    long budget;
    double threshold;
  };
  std::vector<Job> jobs;
  for (auto s : kSeeds) {
    jobs.push_back({&room5, Algo::Ppo, ObservationMode::Local, s, kCurveBudget5, thr5});
    jobs.push_back({&room5, Algo::Dqn, ObservationMode::Local, s, kCurveBudget5, thr5});
  }
  for (auto s : kSeeds) {
    jobs.push_back({&room7, Algo::Ppo, ObservationMode::Local, s, kCurveBudget7, thr7});
    jobs.push_back({&room7, Algo::Ppo, ObservationMode::Global, s, kCurveBudget7, thr7});
  }
  std::vector<std::optional<long>> reached(jobs.size());
  parallel_for(jobs.size(), worker_count(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const auto r = train(*j.map, curve_options(j.algo, j.seed, j.budget, j.mode));
    reached[i] = episodes_to_threshold(r.episodes, j.threshold);
  });
  auto show = [](const std::optional<long>& e) { return e ? std::to_string(*e) : std::string("never"); };
  int ppo_first = 0, global_fails = 0, local_succeeds = 0;
  std::string d5, d7;
  for (std::size_t s = 0; s < kSeeds.size(); ++s) {
    const auto& p = reached[2 * s];
    const auto& q = reached[2 * s + 1];
    ppo_first += p && (!q || *p < *q);
    d5 += (s ? "," : "") + show(p) + "/" + show(q);
    const auto& l = reached[10 + 2 * s];
    const auto& g = reached[10 + 2 * s + 1];
    local_succeeds += l.has_value();
    global_fails += !g.has_value();
    d7 += (s ? "," : "") + show(l) + "/" + show(g);
  }
  const bool ok = ppo_first >= kSeedMajority && local_succeeds >= kSeedMajority && global_fails >= kSeedMajority;
  return {ok, fmt("5x5 PPO before DQN on %d/5 (episodes PPO/DQN: ", ppo_first) + d5 +
                  fmt("); 7x7 local reaches %d/5, global misses %d/5 (local/global: ", local_succeeds,
                      global_fails) +
                  d7 + fmt("); thresholds %.1f / %.1f", thr5, thr7)};
}

Outcome determinism() {
  const GridMap room5 = GridMap::empty(5, 5);
  auto once = [&](Algo algo) {
    TrainOptions o = all_ppo(11, 300);
    o.algo = algo;
    if (algo != Algo::Ppo) o.dqn.warmup = 200;
    std::vector<TrainResult> r(1);
    parallel_for(1, 1, [&](std::size_t) { r[0] = train(room5, o); });
    std::ostringstream p;
    save_policy(r[0].policy, p);
    return std::pair{metrics_csv(r[0].episodes), p.str()};
  };
  bool ok = true;
  std::string detail;
  for (Algo a : {Algo::Ppo, Algo::Dqn}) {
    const auto x = once(a), y = once(a);
    const bool same = x == y;
    ok = ok && same;
    detail += fmt("%s%s: csv %zu bytes, policy %zu bytes, %s", detail.empty() ? "" : "; ",
                  std::string(to_string(a)).c_str(), x.first.size(), x.second.size(),
                  same ? "identical" : "DIFFER");
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* name;
  bool slow;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "reward arithmetic", false, reward_arithmetic},
      {2, "reward shaping arithmetic", false, shaping_arithmetic},
      {3, "PPO clipping table", false, clipping_table},
      {4, "gradient correctness", false, gradient_correctness},
      {5, "observation size invariance", false, observation_sizes},
      {6, "nearest-uncleaned oracle equivalence", false, dnut_oracle},
      {7, "zigzag determinism", false, zigzag_determinism},
      {8, "random far worse than zigzag", false, random_vs_zigzag},
      {9, "desk-scale training", false, desk_training},
      {10, "ablation ordering (slow)", true, ablation_ordering},
      {11, "transfer 5x5 to 20x20", false, transfer},
      {12, "learning-curve properties (slow)", true, learning_curves},
      {13, "determinism", false, determinism},
  };

  bool fast = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--fast")
      fast = true;
    else
      only.insert(std::atoi(a.c_str()));
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    if (fast && c.slow && only.empty()) {
      std::printf("SKIP %2d %s\n", c.id, c.name);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
