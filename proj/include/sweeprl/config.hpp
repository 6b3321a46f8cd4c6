#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sweeprl/bench.hpp"

namespace sweeprl {

/// Everything a CLI invocation resolves to. Written next to every result as
/// config.json; loading it back reproduces the run.
struct RunConfig {
  std::string command;
  std::string algo = "ppo";
  std::string map;
  long episodes = 10000;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;

  std::string observation = "local";
  bool heading = true;
  bool disable_dnut = false;
  bool disable_rs = false;
  bool disable_es = false;
  long elite_cap = kDefaultEliteCap;
  long uncapped_limit = 5000;
  double shaping_base = kDefaultStackBase;
  bool shaping_combined = false;
  bool random_start = false;
  std::vector<std::size_t> hidden{64, 64};

  PpoConfig ppo;
  DqnConfig dqn;

  long step_cap = 3000;
  long random_cap = 1000000;
  std::string policy;
  std::string out;

  std::vector<std::string> files;
  std::string x_column;
  std::string y_column;
  std::size_t smooth = 1;
  std::string title;

  /// Throws Error(InvalidConfig) on out-of-range or unknown enumerations.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Strict: unknown keys and wrong types raise Error(InvalidConfig). Missing
/// keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);

/// FNV-1a of the canonical JSON without the output path, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

TrainOptions train_options(const RunConfig& cfg);

}  // namespace sweeprl
