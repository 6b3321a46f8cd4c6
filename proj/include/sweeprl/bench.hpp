#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sweeprl/percept.hpp"
#include "sweeprl/policy_file.hpp"
#include "sweeprl/ppo.hpp"
#include "sweeprl/qlearn.hpp"
#include "sweeprl/rng.hpp"
#include "sweeprl/shaping.hpp"
#include "sweeprl/world.hpp"

namespace sweeprl {

struct MetricsRecord {
  long episode = 0;
  long steps = 0;
  double coverage = 0.0;
  double distance_m = 0.0;
  long rotation_units = 0;
  double base_reward = 0.0;
  double shaped_reward = 0.0;
  long wall_hits = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kMetricsCsvHeader =
    "episode,steps,coverage,distance_m,rotation_units,base_reward,shaped_reward,wall_hits,seed";

/// Header plus one row per record; six decimals for reals, LF endings.
std::string metrics_csv(const std::vector<MetricsRecord>& records);

enum class Algo { Ppo, Dqn, Dueling, Random, Zigzag };

std::string_view to_string(Algo algo);
Algo algo_from_string(std::string_view name);

/// Picks the next action for a running episode.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void begin_episode(const GridMap&, const AgentState&) {}
  virtual Heading next(const GridMap& map, const AgentState& state) = 0;
};

class RandomController final : public Controller {
 public:
  explicit RandomController(std::uint64_t seed) : rng_(seed) {}
  Heading next(const GridMap& map, const AgentState& state) override;

 private:
  Rng rng_;
};

class ZigzagController final : public Controller {
 public:
  void begin_episode(const GridMap& map, const AgentState& state) override;
  Heading next(const GridMap& map, const AgentState& state) override;

 private:
  std::vector<Heading> plan_;
  std::size_t cursor_ = 0;
};

/// Greedy argmax over policy logits or Q-values. Never modifies the network.
class NetworkController final : public Controller {
 public:
  explicit NetworkController(const PolicyFile& policy);
  Heading next(const GridMap& map, const AgentState& state) override;

 private:
  const PolicyFile& policy_;
  Activations acts_;
  std::vector<double> obs_;
};

struct EpisodeRun {
  MetricsRecord metrics;
  std::vector<Cell> trajectory;  // start cell, then the position after every step
  AgentState final_state;
};

struct StartPose {
  Cell cell;
  Heading heading = Heading::E;
};

/// Rolls one episode until done or `step_cap` steps. Metrics come from the
/// unshaped step outcomes; shaped_reward applies `shaping` for reference.
EpisodeRun run_episode(Controller& controller, const GridMap& map, std::uint64_t seed,
                       const ShapingConfig& shaping, long step_cap,
                       std::optional<StartPose> start = std::nullopt);

/// One row of the ablation: which supplementary techniques are on.
struct Variant {
  std::string name;
  bool dnut = true;
  bool shaping = true;
  bool elite = true;
  ObservationMode mode = ObservationMode::Local;
};

Variant variant_all();
Variant variant_no_dnut();
Variant variant_no_rs();
Variant variant_no_es();
/// Whole-map (x, y, r) input, no DNUT, no shaping, no step cap filter.
Variant variant_plain();
std::vector<Variant> ablation_variants();

struct TrainOptions {
  Algo algo = Algo::Ppo;
  long episodes = 10000;
  std::uint64_t seed = 0;
  ObservationConfig observation;
  ShapingConfig shaping;
  bool elite = true;
  long elite_cap = kDefaultEliteCap;
  /// Step limit when the elite filter is off, so an episode always ends.
  /// Such episodes are kept and bootstrapped from V(s_T).
  long uncapped_limit = 5000;
  /// Start each training episode at a uniformly drawn Free cell and heading.
  bool random_start = false;
  std::vector<std::size_t> hidden{64, 64};
  PpoConfig ppo;
  DqnConfig dqn;
  std::function<void(const MetricsRecord&)> on_episode;
  std::function<void(long update, const PpoUpdateStats&)> on_update;
};

TrainOptions apply_variant(TrainOptions base, const Variant& v);

struct TrainResult {
  PolicyFile policy;
  std::vector<MetricsRecord> episodes;
  std::vector<PpoUpdateStats> updates;
  long skipped_updates = 0;
};

/// Trains PPO, DQN or Dueling DQN on `map`. Fully determined by opts.seed.
TrainResult train(const GridMap& map, const TrainOptions& opts);

/// First episode index at which the trailing `window`-episode mean base
/// reward reaches `threshold`.
std::optional<long> episodes_to_threshold(const std::vector<MetricsRecord>& records,
                                          double threshold, std::size_t window = 100);

/// Mean steps over the last `window` records (all of them if fewer).
double final_mean_steps(const std::vector<MetricsRecord>& records, std::size_t window = 500);

/// Worker count: SWEEPRL_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Runs fn(0..n-1) over `threads` workers. Results must be written to
/// per-index slots; exceptions are rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

struct ExperimentSpec {
  std::string name = "ablation";
  std::filesystem::path map_path;
  long episodes = 10000;
  std::vector<std::uint64_t> seeds{0};
  std::vector<Variant> variants = ablation_variants();
  TrainOptions base;
  std::filesystem::path out_dir;
  std::size_t final_window = 500;
};

struct AblationCell {
  std::string variant;
  std::uint64_t seed;
  double final_mean_steps;
  TrainResult result;
};

/// Trains every (variant, seed) pair. With a non-empty out_dir writes
/// <variant>_seed<k>.csv per run and summary.csv.
std::vector<AblationCell> run_ablation(const ExperimentSpec& spec, const GridMap& map);

/// Greedy rollout of a size-invariant policy on another map, no retraining.
/// Throws Error(ObservationMismatch) for whole-map policies.
MetricsRecord run_transfer(const PolicyFile& policy, const GridMap& map, long step_cap = 3000,
                           std::uint64_t seed = 0);

struct BaselineRow {
  std::string model;
  double distance_m;
  double rotation_units;
  double steps;
  double coverage;
};

/// Random (mean over seeds), Zigzag, and the learned policy when given.
std::vector<BaselineRow> compare_baselines(const GridMap& map,
                                           const std::vector<std::uint64_t>& seeds,
                                           const PolicyFile* policy, long random_cap = 1000000,
                                           long policy_cap = 3000);

std::string baselines_csv(const std::vector<BaselineRow>& rows);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sweeprl
