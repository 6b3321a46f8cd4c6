#include "sweeprl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "sweeprl/error.hpp"
#include "sweeprl/planners.hpp"

namespace sweeprl {

namespace {

void append_row(std::string& out, const MetricsRecord& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%ld,%ld,%.6f,%.6f,%ld,%.6f,%.6f,%ld,%" PRIu64 "\n", m.episode,
                m.steps, m.coverage, m.distance_m, m.rotation_units, m.base_reward,
                m.shaped_reward, m.wall_hits, m.seed);
  out += buf;
}

MetricsRecord metrics_from(const GridMap& map, const AgentState& s, long episode, double shaped) {
  MetricsRecord m;
  m.episode = episode;
  m.steps = s.steps;
  m.coverage = coverage(map, s);
  m.distance_m = s.episode_distance;
  m.rotation_units = s.episode_rotation_units;
  m.base_reward = s.episode_base_reward;
  m.shaped_reward = shaped;
  m.wall_hits = s.blocked_moves;
  m.seed = s.seed;
  return m;
}

AgentState start_episode(const GridMap& map, const TrainOptions& opts, Rng& env_rng,
                         std::uint64_t episode_seed) {
  if (!opts.random_start) return reset(map, episode_seed);
  for (;;) {
    const Cell c = map.cell_at(static_cast<std::size_t>(env_rng.below(map.size())));
    if (!map.is_free(c)) continue;
    const Heading h = heading_from_index(static_cast<int>(env_rng.below(kNumHeadings)));
    return reset_at(map, c, h, episode_seed);
  }
}

TrainResult train_ppo(const GridMap& map, const TrainOptions& opts) {
  const std::size_t obs_size = observation_size(opts.observation, map);
  Architecture arch{obs_size, opts.hidden, HeadLayout::ActorCritic, kNumHeadings};
  PpoAgent agent(arch, opts.ppo, sub_seed(opts.seed, "init"));
  Rng env_rng(sub_seed(opts.seed, "env"));
  Rng sample_rng(sub_seed(opts.seed, "sampling"));
  Rng batch_rng(sub_seed(opts.seed, "minibatch"));

  TrainResult result;
  result.episodes.reserve(static_cast<std::size_t>(opts.episodes));
  RolloutBuffer buffer;
  std::vector<double> obs(obs_size);
  const long cap = opts.elite ? opts.elite_cap : opts.uncapped_limit;
  long update_index = 0;

  auto run_update = [&] {
    try {
      const PpoUpdateStats stats = agent.update(buffer, batch_rng);
      result.updates.push_back(stats);
      if (opts.on_update) opts.on_update(update_index, stats);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyBuffer) throw;
      ++result.skipped_updates;
    }
    ++update_index;
    buffer.episodes.clear();
  };

  for (long ep = 0; ep < opts.episodes; ++ep) {
    AgentState state = start_episode(map, opts, env_rng, opts.seed);
    Episode episode;
    StackState stack{0, opts.shaping.base};
    double shaped_total = 0.0;
    while (!is_done(state) && state.steps < cap) {
      encode(state, map, opts.observation, obs);
      const PolicyStep ps = agent.act(obs, sample_rng);
      const StepOutcome out = step(map, state, heading_from_index(ps.action));
      double shaped = out.base_reward();
      if (opts.shaping.enabled) {
        const ShapedStep s =
            shaped_step(stack, out.tile_reward, out.rotation_reward, opts.shaping.key_on_combined);
        stack = s.next;
        shaped = s.shaped;
      }
      shaped_total += shaped;
      episode.steps.push_back(
          {obs, ps.action, ps.log_prob, out.base_reward(), shaped, ps.value, out.done});
    }
    const bool done = is_done(state);
    episode.kept = opts.elite ? elite_filter(state.steps, done, cap).kept : true;
    if (!done) {
      encode(state, map, opts.observation, obs);
      std::vector<double> probs(kNumHeadings);
      agent.evaluate(obs, probs, episode.bootstrap_value);
    }
    const MetricsRecord m = metrics_from(map, state, ep, shaped_total);
    result.episodes.push_back(m);
    if (opts.on_episode) opts.on_episode(m);
    buffer.episodes.push_back(std::move(episode));
    if (static_cast<int>(buffer.episodes.size()) >= opts.ppo.episodes_per_update) run_update();
  }
  if (!buffer.episodes.empty()) run_update();

  result.policy.network = agent.network();
  result.policy.observation = opts.observation;
  result.policy.meta.algo = "ppo";
  result.policy.meta.episodes = opts.episodes;
  result.policy.meta.seed = opts.seed;
  return result;
}

struct PendingTransition {
  std::vector<double> obs;
  int action;
  double reward;
  std::vector<double> next_obs;
  bool done;
};

TrainResult train_dqn(const GridMap& map, const TrainOptions& opts) {
  const std::size_t obs_size = observation_size(opts.observation, map);
  DqnConfig cfg = opts.dqn;
  cfg.dueling = opts.algo == Algo::Dueling;
  Architecture arch{obs_size, opts.hidden, cfg.dueling ? HeadLayout::Dueling : HeadLayout::Q,
                    kNumHeadings};
  DqnAgent agent(arch, cfg, sub_seed(opts.seed, "init"));
  TargetNet target(agent.network(), cfg.sync_period);
  ReplayMemory memory(cfg.capacity, obs_size);
  Rng env_rng(sub_seed(opts.seed, "env"));
  Rng explore_rng(sub_seed(opts.seed, "explore"));
  Rng batch_rng(sub_seed(opts.seed, "minibatch"));

  TrainResult result;
  std::vector<double> obs(obs_size), next_obs(obs_size);
  std::vector<PendingTransition> pending;
  const long cap = opts.elite ? opts.elite_cap : opts.uncapped_limit;
  const std::size_t start_after = std::max(cfg.warmup, cfg.batch);
  long total_steps = 0;

  for (long ep = 0; ep < opts.episodes; ++ep) {
    AgentState state = start_episode(map, opts, env_rng, opts.seed);
    StackState stack{0, opts.shaping.base};
    double shaped_total = 0.0;
    pending.clear();
    encode(state, map, opts.observation, obs);
    while (!is_done(state) && state.steps < cap) {
      const int action = agent.act(obs, epsilon_at(cfg, total_steps), explore_rng);
      const StepOutcome out = step(map, state, heading_from_index(action));
      double reward = out.base_reward();
      if (opts.shaping.enabled) {
        const ShapedStep s =
            shaped_step(stack, out.tile_reward, out.rotation_reward, opts.shaping.key_on_combined);
        stack = s.next;
        reward = s.shaped;
      }
      shaped_total += reward;
      encode(state, map, opts.observation, next_obs);
      // With the elite filter on, an episode's transitions enter memory only
      // once it is known to have completed.
      if (opts.elite)
        pending.push_back({obs, action, reward, next_obs, out.done});
      else
        memory.push(obs, action, reward, next_obs, out.done);
      obs.swap(next_obs);
      ++total_steps;
      if (memory.size() >= start_after) agent.update(memory, target, batch_rng);
      target.maybe_sync(agent.network(), total_steps);
    }
    if (opts.elite && elite_filter(state.steps, is_done(state), cap).kept)
      for (const auto& t : pending) memory.push(t.obs, t.action, t.reward, t.next_obs, t.done);
    const MetricsRecord m = metrics_from(map, state, ep, shaped_total);
    result.episodes.push_back(m);
    if (opts.on_episode) opts.on_episode(m);
  }

  result.policy.network = agent.network();
  result.policy.observation = opts.observation;
  result.policy.meta.algo = std::string(to_string(opts.algo));
  result.policy.meta.episodes = opts.episodes;
  result.policy.meta.seed = opts.seed;
  return result;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
  std::string out(kMetricsCsvHeader);
  out += '\n';
  for (const auto& m : records) append_row(out, m);
  return out;
}

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::Ppo: return "ppo";
    case Algo::Dqn: return "dqn";
    case Algo::Dueling: return "dueling";
    case Algo::Random: return "random";
    case Algo::Zigzag: return "zigzag";
  }
  return "?";
}

Algo algo_from_string(std::string_view name) {
  for (const Algo a : {Algo::Ppo, Algo::Dqn, Algo::Dueling, Algo::Random, Algo::Zigzag})
    if (to_string(a) == name) return a;
  throw Error(ErrorCode::InvalidConfig, "unknown algorithm '" + std::string(name) + "'");
}

Heading RandomController::next(const GridMap& map, const AgentState& state) {
  return random_step(state, map, rng_);
}

void ZigzagController::begin_episode(const GridMap& map, const AgentState& state) {
  plan_ = zigzag_plan_from(map, state.pos);
  cursor_ = 0;
}

Heading ZigzagController::next(const GridMap&, const AgentState& state) {
  // Past the end of the plan only happens on a map that is already clean.
  if (cursor_ >= plan_.size()) return state.heading;
  return plan_[cursor_++];
}

NetworkController::NetworkController(const PolicyFile& policy) : policy_(policy) {}

Heading NetworkController::next(const GridMap& map, const AgentState& state) {
  obs_.resize(observation_size(policy_.observation, map));
  encode(state, map, policy_.observation, obs_);
  policy_.network.forward(obs_, acts_);
  std::vector<double> scores = policy_.network.architecture().heads == HeadLayout::ActorCritic
                                   ? acts_.heads[0]
                                   : q_values(policy_.network, acts_);
  return heading_from_index(
      static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin()));
}

EpisodeRun run_episode(Controller& controller, const GridMap& map, std::uint64_t seed,
                       const ShapingConfig& shaping, long step_cap,
                       std::optional<StartPose> start) {
  EpisodeRun run;
  AgentState state = start ? reset_at(map, start->cell, start->heading, seed) : reset(map, seed);
  controller.begin_episode(map, state);
  run.trajectory.push_back(state.pos);
  StackState stack{0, shaping.base};
  double shaped_total = 0.0;
  while (!is_done(state) && state.steps < step_cap) {
    const StepOutcome out = step(map, state, controller.next(map, state));
    if (shaping.enabled) {
      const ShapedStep s =
          shaped_step(stack, out.tile_reward, out.rotation_reward, shaping.key_on_combined);
      stack = s.next;
      shaped_total += s.shaped;
    } else {
      shaped_total += out.base_reward();
    }
    run.trajectory.push_back(state.pos);
  }
  run.metrics = metrics_from(map, state, 0, shaped_total);
  run.final_state = std::move(state);
  return run;
}

Variant variant_all() { return {"all", true, true, true, ObservationMode::Local}; }
Variant variant_no_dnut() { return {"no_dnut", false, true, true, ObservationMode::Local}; }
Variant variant_no_rs() { return {"no_rs", true, false, true, ObservationMode::Local}; }
Variant variant_no_es() { return {"no_es", true, true, false, ObservationMode::Local}; }
Variant variant_plain() { return {"plain", false, false, false, ObservationMode::Global}; }

std::vector<Variant> ablation_variants() {
  return {variant_all(), variant_no_dnut(), variant_no_rs(), variant_no_es(), variant_plain()};
}

TrainOptions apply_variant(TrainOptions base, const Variant& v) {
  base.observation.mode = v.mode;
  base.observation.dnut = v.dnut;
  base.shaping.enabled = v.shaping;
  base.elite = v.elite;
  return base;
}

TrainResult train(const GridMap& map, const TrainOptions& opts) {
  switch (opts.algo) {
    case Algo::Ppo: return train_ppo(map, opts);
    case Algo::Dqn:
    case Algo::Dueling: return train_dqn(map, opts);
    case Algo::Random:
    case Algo::Zigzag: break;
  }
  throw Error(ErrorCode::InvalidConfig, "scripted planners are not trainable");
}

std::optional<long> episodes_to_threshold(const std::vector<MetricsRecord>& records,
                                          double threshold, std::size_t window) {
  if (window == 0 || records.size() < window) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    sum += records[i].base_reward;
    if (i >= window) sum -= records[i - window].base_reward;
    if (i + 1 >= window && sum / static_cast<double>(window) >= threshold)
      return static_cast<long>(i);
  }
  return std::nullopt;
}

double final_mean_steps(const std::vector<MetricsRecord>& records, std::size_t window) {
  if (records.empty()) return 0.0;
  const std::size_t n = std::min(window, records.size());
  double sum = 0.0;
  for (std::size_t i = records.size() - n; i < records.size(); ++i)
    sum += static_cast<double>(records[i].steps);
  return sum / static_cast<double>(n);
}

unsigned worker_count() {
  if (const char* env = std::getenv("SWEEPRL_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<AblationCell> run_ablation(const ExperimentSpec& spec, const GridMap& map) {
  if (spec.seeds.empty()) throw Error(ErrorCode::InvalidConfig, "experiment needs at least one seed");
  std::vector<AblationCell> cells;
  for (const auto& v : spec.variants)
    for (const auto seed : spec.seeds) cells.push_back({v.name, seed, 0.0, {}});

  parallel_for(cells.size(), worker_count(), [&](std::size_t i) {
    const Variant& v = spec.variants[i / spec.seeds.size()];
    TrainOptions opts = apply_variant(spec.base, v);
    opts.episodes = spec.episodes;
    opts.seed = cells[i].seed;
    opts.on_episode = nullptr;
    opts.on_update = nullptr;
    cells[i].result = train(map, opts);
    cells[i].final_mean_steps = final_mean_steps(cells[i].result.episodes, spec.final_window);
  });

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    std::string summary = "variant,seed,final_mean_steps\n";
    for (const auto& c : cells) {
      write_text(spec.out_dir / (c.variant + "_seed" + std::to_string(c.seed) + ".csv"),
                 metrics_csv(c.result.episodes));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", c.final_mean_steps);
      summary += c.variant + "," + std::to_string(c.seed) + "," + buf + "\n";
    }
    write_text(spec.out_dir / "summary.csv", summary);
  }
  return cells;
}

MetricsRecord run_transfer(const PolicyFile& policy, const GridMap& map, long step_cap,
                           std::uint64_t seed) {
  if (policy.observation.mode != ObservationMode::Local)
    throw Error(ErrorCode::ObservationMismatch,
                "whole-map observations depend on map size; only local policies transfer");
  check_compatible(policy, map);
  NetworkController controller(policy);
  return run_episode(controller, map, seed, ShapingConfig{}, step_cap).metrics;
}

std::vector<BaselineRow> compare_baselines(const GridMap& map,
                                           const std::vector<std::uint64_t>& seeds,
                                           const PolicyFile* policy, long random_cap,
                                           long policy_cap) {
  std::vector<BaselineRow> rows;
  const ShapingConfig shaping{};
  if (!seeds.empty()) {
    BaselineRow r{"Random", 0, 0, 0, 0};
    for (const auto seed : seeds) {
      RandomController rc(sub_seed(seed, "random-planner"));
      const auto m = run_episode(rc, map, seed, shaping, random_cap).metrics;
      r.distance_m += m.distance_m;
      r.rotation_units += static_cast<double>(m.rotation_units);
      r.steps += static_cast<double>(m.steps);
      r.coverage += m.coverage;
    }
    const double n = static_cast<double>(seeds.size());
    r.distance_m /= n;
    r.rotation_units /= n;
    r.steps /= n;
    r.coverage /= n;
    rows.push_back(r);
  }
  {
    ZigzagController zc;
    const auto m = run_episode(zc, map, 0, shaping, static_cast<long>(map.size()) * 4).metrics;
    rows.push_back({"Zigzag", m.distance_m, static_cast<double>(m.rotation_units),
                    static_cast<double>(m.steps), m.coverage});
  }
  if (policy) {
    const auto m = run_transfer(*policy, map, policy_cap);
    rows.push_back({"ALL(PPO)", m.distance_m, static_cast<double>(m.rotation_units),
                    static_cast<double>(m.steps), m.coverage});
  }
  return rows;
}

std::string baselines_csv(const std::vector<BaselineRow>& rows) {
  std::string out = "model,distance_m,rotation_units,steps,coverage\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f\n", r.model.c_str(), r.distance_m,
                  r.rotation_units, r.steps, r.coverage);
    out += buf;
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sweeprl
