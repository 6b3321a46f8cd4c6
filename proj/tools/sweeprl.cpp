// sweeprl: train, evaluate and compare cleaning-robot coverage policies.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sweeprl/bench.hpp"
#include "sweeprl/config.hpp"
#include "sweeprl/error.hpp"
#include "sweeprl/kernels.hpp"
#include "sweeprl/mapio.hpp"
#include "sweeprl/plot.hpp"
#include "sweeprl/policy_file.hpp"

namespace fs = std::filesystem;
using namespace sweeprl;

namespace {

void echo_config(const RunConfig& cfg, const fs::path& dir) {
  write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");
}

fs::path out_dir(const RunConfig& cfg) {
  return cfg.out.empty() ? fs::path("runs") / cfg.command : fs::path(cfg.out);
}

std::vector<Series> per_file_series(const std::vector<std::pair<std::string, std::string>>& named_csv,
                                    const std::string& y, std::size_t smooth) {
  std::vector<Series> out;
  for (const auto& [name, text] : named_csv) {
    const CsvTable t = parse_csv(text);
    out.push_back({name, t.numeric_column(t.column("episode")),
                   moving_average(t.numeric_column(t.column(y)), smooth)});
  }
  return out;
}

int cmd_train(RunConfig cfg) {
  cfg.validate();
  const GridMap map = load_map(cfg.map);
  TrainOptions opts = train_options(cfg);
  const fs::path dir = out_dir(cfg);
  fs::create_directories(dir);

  std::string updates = "update,samples,first_minibatch_ratio,mean_ratio,clip_fraction,policy_loss,value_loss,entropy\n";
  opts.on_update = [&updates](long i, const PpoUpdateStats& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%ld,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", i, s.samples,
                  s.first_minibatch_ratio, s.mean_ratio, s.clip_fraction, s.policy_loss,
                  s.value_loss, s.entropy);
    updates += buf;
  };
  const long report_every = std::max(1L, cfg.episodes / 20);
  opts.on_episode = [&](const MetricsRecord& m) {
    if ((m.episode + 1) % report_every == 0)
      std::fprintf(stderr, "episode %ld: steps %ld coverage %.3f base %.2f\n", m.episode + 1,
                   m.steps, m.coverage, m.base_reward);
  };

  TrainResult result = train(map, opts);
  result.policy.meta.config_hash = config_hash(cfg);
  save_policy(result.policy, dir / "policy.sweeprl");
  write_text(dir / "episodes.csv", metrics_csv(result.episodes));
  if (opts.algo == Algo::Ppo) write_text(dir / "updates.csv", updates);
  ChartOptions chart{"Training steps per episode", "episode", "steps"};
  write_text(dir / "steps.svg",
             line_chart_svg(per_file_series({{cfg.algo, metrics_csv(result.episodes)}}, "steps",
                                            std::max<std::size_t>(cfg.smooth, 100)),
                            chart));
  echo_config(cfg, dir);
  std::printf("trained %s for %ld episodes (%ld skipped updates) -> %s\n", cfg.algo.c_str(),
              cfg.episodes, result.skipped_updates, dir.string().c_str());
  return 0;
}

int cmd_eval(RunConfig cfg) {
  cfg.validate();
  const GridMap map = load_map(cfg.map);
  const fs::path dir = out_dir(cfg);
  fs::create_directories(dir);

  std::unique_ptr<Controller> controller;
  PolicyFile policy;
  if (!cfg.policy.empty()) {
    policy = load_policy(cfg.policy);
    check_compatible(policy, map);
    controller = std::make_unique<NetworkController>(policy);
  } else if (cfg.algo == "random") {
    controller = std::make_unique<RandomController>(sub_seed(cfg.seed, "random-planner"));
  } else if (cfg.algo == "zigzag") {
    controller = std::make_unique<ZigzagController>();
  } else {
    throw Error(ErrorCode::InvalidConfig, "eval needs --policy or --algo random|zigzag");
  }
  const EpisodeRun run = run_episode(*controller, map, cfg.seed, ShapingConfig{}, cfg.step_cap);
  write_text(dir / "eval.csv", metrics_csv({run.metrics}));
  write_text(dir / "trajectory.svg", trajectory_svg(map, run.trajectory, run.final_state));
  echo_config(cfg, dir);
  const auto& m = run.metrics;
  std::printf("steps %ld coverage %.6f distance_m %.6f rotation_units %ld wall_hits %ld\n", m.steps,
              m.coverage, m.distance_m, m.rotation_units, m.wall_hits);
  return 0;
}

int cmd_compare(RunConfig cfg) {
  if (cfg.seeds.empty()) cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  cfg.validate();
  const GridMap map = load_map(cfg.map);
  const fs::path dir = out_dir(cfg);
  PolicyFile policy;
  const bool have_policy = !cfg.policy.empty();
  if (have_policy) policy = load_policy(cfg.policy);
  const auto rows =
      compare_baselines(map, cfg.seeds, have_policy ? &policy : nullptr, cfg.random_cap, cfg.step_cap);
  write_text(dir / "table.csv", baselines_csv(rows));
  std::vector<std::string> models;
  BarGroup dist{"distance (m)", {}}, rot{"rotation units", {}};
  for (const auto& r : rows) {
    models.push_back(r.model);
    dist.values.push_back(r.distance_m);
    rot.values.push_back(r.rotation_units);
  }
  ChartOptions chart{"Travel distance and rotation", "model", "value (log scale)"};
  chart.log_y = true;
  write_text(dir / "table.svg", bar_chart_svg(models, {dist, rot}, chart));
  echo_config(cfg, dir);
  std::fputs(baselines_csv(rows).c_str(), stdout);
  return 0;
}

int cmd_ablate(RunConfig cfg) {
  if (cfg.seeds.empty()) cfg.seeds = {cfg.seed};
  cfg.validate();
  const GridMap map = load_map(cfg.map);
  ExperimentSpec spec;
  spec.map_path = cfg.map;
  spec.episodes = cfg.episodes;
  spec.seeds = cfg.seeds;
  spec.base = train_options(cfg);
  spec.out_dir = out_dir(cfg);
  const auto cells = run_ablation(spec, map);

  std::vector<std::pair<std::string, std::string>> curves;
  for (const auto& c : cells)
    if (c.seed == cfg.seeds.front())
      curves.emplace_back(c.variant, metrics_csv(c.result.episodes));
  ChartOptions chart{"Ablation: steps per episode (seed " + std::to_string(cfg.seeds.front()) + ")",
                     "episode", "steps"};
  write_text(spec.out_dir / "steps.svg",
             line_chart_svg(per_file_series(curves, "steps", std::max<std::size_t>(cfg.smooth, 100)),
                            chart));
  echo_config(cfg, spec.out_dir);
  for (const auto& c : cells)
    std::printf("%-8s seed %" PRIu64 ": final mean steps %.2f\n", c.variant.c_str(), c.seed,
                c.final_mean_steps);
  return 0;
}

int cmd_plot(RunConfig cfg) {
  cfg.validate();
  PlotRequest req;
  for (const auto& f : cfg.files) {
    req.csv_texts.push_back(read_text(f));
    req.names.push_back(fs::path(f).stem().string());
  }
  req.x_column = cfg.x_column;
  req.y_column = cfg.y_column;
  req.smooth = cfg.smooth;
  req.chart.title = cfg.title;
  req.chart.x_label = cfg.x_column;
  req.chart.y_label = cfg.y_column;
  const std::string svg = emit_plot(req);
  const fs::path target = cfg.out.empty() ? fs::path("plot.svg") : fs::path(cfg.out);
  write_text(target, svg);
  std::printf("wrote %s\n", target.string().c_str());
  return 0;
}

int cmd_map_validate(const RunConfig& cfg) {
  const GridMap map = load_map(cfg.map);
  const Cell s = map.default_start();
  std::printf("ok %dx%d free=%zu start=(%d,%d)\n", map.width(), map.height(), map.free_count(), s.row,
              s.col);
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "train") return cmd_train(cfg);
  if (cfg.command == "eval") return cmd_eval(cfg);
  if (cfg.command == "compare") return cmd_compare(cfg);
  if (cfg.command == "ablate") return cmd_ablate(cfg);
  if (cfg.command == "plot") return cmd_plot(cfg);
  if (cfg.command == "map-validate") return cmd_map_validate(cfg);
  throw Error(ErrorCode::InvalidConfig, "unknown command '" + cfg.command + "'");
}

void add_training_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--algo", c.algo, "ppo|dqn|dueling|random|zigzag")
      ->check(CLI::IsMember({"ppo", "dqn", "dueling", "random", "zigzag"}));
  app->add_option("--episodes", c.episodes, "Training episodes");
  app->add_option("--observation", c.observation, "local|global")
      ->check(CLI::IsMember({"local", "global"}));
  app->add_flag("!--no-heading", c.heading, "Drop the heading one-hot (11-feature input)");
  app->add_flag("--disable-dnut", c.disable_dnut, "Zero the nearest-uncleaned features");
  app->add_flag("--disable-rs", c.disable_rs, "Train on unshaped rewards");
  app->add_flag("--disable-es", c.disable_es, "Keep every episode; no 500-step truncation");
  app->add_option("--elite-cap", c.elite_cap, "Truncation length for the elite filter");
  app->add_option("--uncapped-limit", c.uncapped_limit, "Episode limit when the elite filter is off");
  app->add_option("--shaping-base", c.shaping_base, "Stacked-value base R");
  app->add_flag("--shaping-combined", c.shaping_combined, "Key the streak on tile + rotation reward");
  app->add_flag("--random-start", c.random_start, "Random start pose per training episode");
  app->add_option("--hidden", c.hidden, "Hidden layer widths")->delimiter(',');
  app->add_option("--gamma", c.ppo.gamma, "Discount (PPO)");
  app->add_option("--lambda", c.ppo.lam, "GAE lambda");
  app->add_option("--clip", c.ppo.clip_eps, "PPO clip epsilon");
  app->add_option("--epochs", c.ppo.epochs, "PPO epochs per update");
  app->add_option("--minibatch", c.ppo.minibatch, "PPO minibatch size");
  app->add_option("--lr", c.ppo.lr, "PPO learning rate");
  app->add_option("--value-coef", c.ppo.value_coef, "PPO value loss weight");
  app->add_option("--entropy-coef", c.ppo.entropy_coef, "PPO entropy bonus weight");
  app->add_option("--episodes-per-update", c.ppo.episodes_per_update, "Episodes per PPO update");
  app->add_option("--dqn-lr", c.dqn.lr, "DQN learning rate");
  app->add_option("--dqn-sync", c.dqn.sync_period, "Target network sync period (steps)");
  app->add_option("--dqn-capacity", c.dqn.capacity, "Replay memory capacity");
  app->add_option("--dqn-eps-decay", c.dqn.epsilon_decay_steps, "Epsilon decay steps");
  app->add_flag("!--dqn-squared", c.dqn.huber, "Squared TD error instead of Huber");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage path planning with reinforcement learning"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "Run a resolved config.json");
  bool show_isa = false;
  app.add_flag("--show-isa", show_isa, "Print the selected SIMD kernel set");

  RunConfig cfg;

  auto* train = app.add_subcommand("train", "Train a policy");
  train->add_option("--map", cfg.map, "Map file")->required();
  train->add_option("--seed", cfg.seed, "Seed for all randomness");
  train->add_option("--out", cfg.out, "Output directory");
  add_training_flags(train, cfg);

  auto* eval = app.add_subcommand("eval", "Roll out one greedy episode");
  eval->add_option("--map", cfg.map, "Map file")->required();
  eval->add_option("--policy", cfg.policy, "Policy file");
  eval->add_option("--algo", cfg.algo, "random|zigzag when no policy is given")
      ->check(CLI::IsMember({"ppo", "dqn", "dueling", "random", "zigzag"}));
  eval->add_option("--seed", cfg.seed, "Seed");
  eval->add_option("--step-cap", cfg.step_cap, "Episode step limit");
  eval->add_option("--out", cfg.out, "Output directory");

  auto* compare = app.add_subcommand("compare", "Random vs Zigzag vs learned policy");
  compare->add_option("--map", cfg.map, "Map file")->required();
  compare->add_option("--policy", cfg.policy, "Policy file");
  compare->add_option("--seeds", cfg.seeds, "Random baseline seeds")->delimiter(',');
  compare->add_option("--step-cap", cfg.step_cap, "Step limit for the learned policy");
  compare->add_option("--random-cap", cfg.random_cap, "Step limit for the random baseline");
  compare->add_option("--out", cfg.out, "Output directory");

  auto* ablate = app.add_subcommand("ablate", "ALL / -DNUT / -RS / -ES / plain PPO study");
  ablate->add_option("--map", cfg.map, "Map file")->required();
  ablate->add_option("--seeds", cfg.seeds, "Seeds")->delimiter(',');
  ablate->add_option("--out", cfg.out, "Output directory");
  ablate->add_option("--smooth", cfg.smooth, "Moving-average window for the curve plot");
  add_training_flags(ablate, cfg);

  auto* plot = app.add_subcommand("plot", "SVG line chart from CSV files");
  plot->add_option("--files", cfg.files, "CSV files")->required()->delimiter(',');
  plot->add_option("--x", cfg.x_column, "x column (default: first)");
  plot->add_option("--y", cfg.y_column, "y column (default: all others)");
  plot->add_option("--smooth", cfg.smooth, "Moving-average window");
  plot->add_option("--title", cfg.title, "Chart title");
  plot->add_option("--out", cfg.out, "Output SVG path");

  auto* validate = app.add_subcommand("map-validate", "Parse and check a map file");
  validate->add_option("--map", cfg.map, "Map file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (show_isa) std::printf("kernels: %s\n", std::string(kernels::to_string(kernels::active().isa)).c_str());

  try {
    if (!config_path.empty()) {
      const auto j = nlohmann::json::parse(read_text(config_path));
      return dispatch(run_config_from_json(j));
    }
    if (app.get_subcommands().empty()) {
      if (show_isa) return 0;
      std::cerr << app.help();
      return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return dispatch(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
