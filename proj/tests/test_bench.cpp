#include <doctest.h>

#include <filesystem>

#include "sweeprl/bench.hpp"
#include "sweeprl/error.hpp"
#include "sweeprl/mapio.hpp"

using namespace sweeprl;
namespace fs = std::filesystem;

namespace {

TrainOptions quick(Algo algo, long episodes, std::uint64_t seed) {
  TrainOptions o;
  o.algo = algo;
  o.episodes = episodes;
  o.seed = seed;
  o.hidden = {16, 16};
  o.dqn.warmup = 64;
  return o;
}

}  // namespace

TEST_CASE("metrics csv layout") {
  MetricsRecord r{3, 24, 1.0, 12.0, 16, -8.0, 30.5, 0, 7};
  const std::string csv = metrics_csv({r});
  CHECK(csv == std::string(kMetricsCsvHeader) +
                   "\n3,24,1.000000,12.000000,16,-8.000000,30.500000,0,7\n");
}

TEST_CASE("algo names") {
  for (Algo a : {Algo::Ppo, Algo::Dqn, Algo::Dueling, Algo::Random, Algo::Zigzag})
    CHECK(algo_from_string(to_string(a)) == a);
  CHECK_THROWS_AS(algo_from_string("sarsa"), Error);
}

TEST_CASE("episode runner") {
  const GridMap m = GridMap::empty(5, 5);
  SUBCASE("zigzag") {
    ZigzagController z;
    const auto run = run_episode(z, m, 0, ShapingConfig{}, 3000);
    CHECK(run.metrics.steps == 24);
    CHECK(run.metrics.coverage == 1.0);
    CHECK(run.metrics.distance_m == 12.0);
    CHECK(run.trajectory.size() == 25);
    CHECK(run.metrics.wall_hits == 0);
  }
  SUBCASE("random hits the cap in a maze") {
    std::string text;
    for (int r = 0; r < 21; ++r) {
      for (int c = 0; c < 21; ++c) text += (r % 2 == 1 && c % 2 == 1) ? '#' : '.';
      text += '\n';
    }
    const GridMap maze = parse_map(text);
    RandomController r(1);
    const auto run = run_episode(r, maze, 1, ShapingConfig{}, 500);
    CHECK(run.metrics.steps == 500);
    CHECK(run.metrics.coverage < 1.0);
  }
  SUBCASE("explicit start pose") {
    ZigzagController z;
    const auto run = run_episode(z, m, 0, ShapingConfig{}, 3000, StartPose{{4, 4}, Heading::N});
    CHECK(run.trajectory.front() == Cell{4, 4});
    CHECK(run.metrics.coverage == 1.0);
  }
}

TEST_CASE("variants") {
  const auto v = ablation_variants();
  REQUIRE(v.size() == 5);
  CHECK(v[0].name == "all");
  const auto plain = variant_plain();
  CHECK_FALSE(plain.dnut);
  CHECK_FALSE(plain.shaping);
  CHECK_FALSE(plain.elite);
  CHECK(plain.mode == ObservationMode::Global);
  const auto o = apply_variant(TrainOptions{}, variant_no_rs());
  CHECK_FALSE(o.shaping.enabled);
  CHECK(o.observation.dnut);
  CHECK(o.elite);
}

TEST_CASE("training is seed deterministic and evaluation is pure") {
  const GridMap m = GridMap::empty(4, 4);
  for (Algo algo : {Algo::Ppo, Algo::Dqn, Algo::Dueling}) {
    CAPTURE(to_string(algo));
    const auto a = train(m, quick(algo, 30, 5));
    const auto b = train(m, quick(algo, 30, 5));
    const auto c = train(m, quick(algo, 30, 6));
    CHECK(metrics_csv(a.episodes) == metrics_csv(b.episodes));
    CHECK(a.policy.network == b.policy.network);
    CHECK_FALSE(a.policy.network == c.policy.network);
    CHECK(a.episodes.size() == 30);

    const auto before = a.policy.network;
    NetworkController ctl(a.policy);
    run_episode(ctl, m, 0, ShapingConfig{}, 100);
    CHECK(a.policy.network == before);
  }
}

TEST_CASE("training options reach the policy") {
  const GridMap m = GridMap::empty(5, 5);
  auto o = quick(Algo::Ppo, 2, 0);
  o.observation.mode = ObservationMode::Global;
  const auto r = train(m, o);
  CHECK(r.policy.network.architecture().inputs == 75);
  CHECK(r.policy.meta.episodes == 2);
  CHECK_THROWS_AS(run_transfer(r.policy, GridMap::empty(20, 20)), Error);
}

TEST_CASE("threshold and window helpers") {
  std::vector<MetricsRecord> recs;
  for (long i = 0; i < 10; ++i) recs.push_back({i, 10 - i, 1.0, 0, 0, -double(10 - i), 0, 0, 0});
  CHECK(episodes_to_threshold(recs, -6.0, 3) == 5);  // mean of -7,-6,-5
  CHECK_FALSE(episodes_to_threshold(recs, 0.0, 3).has_value());
  CHECK(final_mean_steps(recs, 2) == doctest::Approx(1.5));
  CHECK(final_mean_steps(recs, 100) == doctest::Approx(5.5));
}

TEST_CASE("parallel for visits every index once and rethrows") {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw Error(ErrorCode::Io, "boom");
  }));
}

TEST_CASE("ablation bookkeeping") {
  const fs::path dir = fs::temp_directory_path() / "sweeprl_ablation_test";
  fs::remove_all(dir);
  ExperimentSpec spec;
  spec.episodes = 3;
  spec.seeds = {0, 1, 2};
  spec.base = quick(Algo::Ppo, 3, 0);
  spec.out_dir = dir;
  const auto cells = run_ablation(spec, GridMap::empty(4, 4));
  CHECK(cells.size() == 15);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(dir)) csvs += e.path().extension() == ".csv";
  CHECK(csvs == 16);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "plain_seed2.csv"));
  fs::remove_all(dir);
}

TEST_CASE("baseline table") {
  const GridMap m = GridMap::empty(6, 6);
  const auto rows = compare_baselines(m, {0, 1, 2}, nullptr);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].model == "Random");
  CHECK(rows[1].model == "Zigzag");
  CHECK(rows[1].distance_m == 17.5);
  CHECK(rows[0].distance_m > rows[1].distance_m);
  CHECK(baselines_csv(rows).rfind("model,distance_m,rotation_units,steps,coverage\n", 0) == 0);
}
