#include "sweeprl/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <functional>
#include <map>

#include "sweeprl/error.hpp"
#include "sweeprl/rng.hpp"

namespace sweeprl {

using nlohmann::json;

void RunConfig::validate() const {
  if (observation != "local" && observation != "global")
    throw Error(ErrorCode::InvalidConfig, "observation must be 'local' or 'global'");
  algo_from_string(algo);
  if (episodes < 0) throw Error(ErrorCode::InvalidConfig, "episodes must be >= 0");
  if (elite_cap < 1 || uncapped_limit < 1 || step_cap < 1 || random_cap < 1)
    throw Error(ErrorCode::InvalidConfig, "step caps must be >= 1");
  if (!(shaping_base > 0.0)) throw Error(ErrorCode::InvalidConfig, "shaping base must be positive");
  if (hidden.empty()) throw Error(ErrorCode::InvalidConfig, "need at least one hidden layer");
  for (const auto h : hidden)
    if (h == 0) throw Error(ErrorCode::InvalidConfig, "hidden layer width must be positive");
  ppo.validate();
  if (dqn.batch == 0 || dqn.capacity < dqn.batch)
    throw Error(ErrorCode::InvalidConfig, "dqn capacity must hold at least one batch");
}

json to_json(const RunConfig& c) {
  return json{
      {"command", c.command},
      {"algo", c.algo},
      {"map", c.map},
      {"episodes", c.episodes},
      {"seed", c.seed},
      {"seeds", c.seeds},
      {"observation", c.observation},
      {"heading", c.heading},
      {"disable_dnut", c.disable_dnut},
      {"disable_rs", c.disable_rs},
      {"disable_es", c.disable_es},
      {"elite_cap", c.elite_cap},
      {"uncapped_limit", c.uncapped_limit},
      {"shaping_base", c.shaping_base},
      {"shaping_combined", c.shaping_combined},
      {"random_start", c.random_start},
      {"hidden", c.hidden},
      {"ppo",
       {{"gamma", c.ppo.gamma},
        {"lam", c.ppo.lam},
        {"clip_eps", c.ppo.clip_eps},
        {"epochs", c.ppo.epochs},
        {"minibatch", c.ppo.minibatch},
        {"lr", c.ppo.lr},
        {"value_coef", c.ppo.value_coef},
        {"entropy_coef", c.ppo.entropy_coef},
        {"episodes_per_update", c.ppo.episodes_per_update},
        {"normalize_advantages", c.ppo.normalize_advantages},
        {"normalize_returns", c.ppo.normalize_returns},
        {"max_grad_norm", c.ppo.max_grad_norm}}},
      {"dqn",
       {{"gamma", c.dqn.gamma},
        {"lr", c.dqn.lr},
        {"batch", c.dqn.batch},
        {"capacity", c.dqn.capacity},
        {"sync_period", c.dqn.sync_period},
        {"epsilon_start", c.dqn.epsilon_start},
        {"epsilon_end", c.dqn.epsilon_end},
        {"epsilon_decay_steps", c.dqn.epsilon_decay_steps},
        {"warmup", c.dqn.warmup},
        {"huber", c.dqn.huber},
        {"max_grad_norm", c.dqn.max_grad_norm}}},
      {"step_cap", c.step_cap},
      {"random_cap", c.random_cap},
      {"policy", c.policy},
      {"out", c.out},
      {"files", c.files},
      {"x_column", c.x_column},
      {"y_column", c.y_column},
      {"smooth", c.smooth},
      {"title", c.title},
  };
}

namespace {

template <typename T>
void read(const json& obj, const char* key, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const char* where) {
  if (!obj.is_object()) throw Error(ErrorCode::InvalidConfig, std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in " + where);
  }
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  reject_unknown(j,
                 {"command", "algo", "map", "episodes", "seed", "seeds", "observation", "heading",
                  "disable_dnut", "disable_rs", "disable_es", "elite_cap", "uncapped_limit",
                  "shaping_base", "shaping_combined", "random_start", "hidden", "ppo", "dqn",
                  "step_cap", "random_cap", "policy", "out", "files", "x_column", "y_column",
                  "smooth", "title"},
                 "config");
  RunConfig c;
  read(j, "command", c.command);
  read(j, "algo", c.algo);
  read(j, "map", c.map);
  read(j, "episodes", c.episodes);
  read(j, "seed", c.seed);
  read(j, "seeds", c.seeds);
  read(j, "observation", c.observation);
  read(j, "heading", c.heading);
  read(j, "disable_dnut", c.disable_dnut);
  read(j, "disable_rs", c.disable_rs);
  read(j, "disable_es", c.disable_es);
  read(j, "elite_cap", c.elite_cap);
  read(j, "uncapped_limit", c.uncapped_limit);
  read(j, "shaping_base", c.shaping_base);
  read(j, "shaping_combined", c.shaping_combined);
  read(j, "random_start", c.random_start);
  read(j, "hidden", c.hidden);
  if (j.contains("ppo")) {
    const json& p = j.at("ppo");
    reject_unknown(p,
                   {"gamma", "lam", "clip_eps", "epochs", "minibatch", "lr", "value_coef",
                    "entropy_coef", "episodes_per_update", "normalize_advantages",
                    "normalize_returns", "max_grad_norm"},
                   "ppo");
    read(p, "gamma", c.ppo.gamma);
    read(p, "lam", c.ppo.lam);
    read(p, "clip_eps", c.ppo.clip_eps);
    read(p, "epochs", c.ppo.epochs);
    read(p, "minibatch", c.ppo.minibatch);
    read(p, "lr", c.ppo.lr);
    read(p, "value_coef", c.ppo.value_coef);
    read(p, "entropy_coef", c.ppo.entropy_coef);
    read(p, "episodes_per_update", c.ppo.episodes_per_update);
    read(p, "normalize_advantages", c.ppo.normalize_advantages);
    read(p, "normalize_returns", c.ppo.normalize_returns);
    read(p, "max_grad_norm", c.ppo.max_grad_norm);
  }
  if (j.contains("dqn")) {
    const json& d = j.at("dqn");
    reject_unknown(d,
                   {"gamma", "lr", "batch", "capacity", "sync_period", "epsilon_start",
                    "epsilon_end", "epsilon_decay_steps", "warmup", "huber", "max_grad_norm"},
                   "dqn");
    read(d, "gamma", c.dqn.gamma);
    read(d, "lr", c.dqn.lr);
    read(d, "batch", c.dqn.batch);
    read(d, "capacity", c.dqn.capacity);
    read(d, "sync_period", c.dqn.sync_period);
    read(d, "epsilon_start", c.dqn.epsilon_start);
    read(d, "epsilon_end", c.dqn.epsilon_end);
    read(d, "epsilon_decay_steps", c.dqn.epsilon_decay_steps);
    read(d, "warmup", c.dqn.warmup);
    read(d, "huber", c.dqn.huber);
    read(d, "max_grad_norm", c.dqn.max_grad_norm);
  }
  read(j, "step_cap", c.step_cap);
  read(j, "random_cap", c.random_cap);
  read(j, "policy", c.policy);
  read(j, "out", c.out);
  read(j, "files", c.files);
  read(j, "x_column", c.x_column);
  read(j, "y_column", c.y_column);
  read(j, "smooth", c.smooth);
  read(j, "title", c.title);
  c.validate();
  return c;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  // Where results go does not change what they are.
  json j = to_json(cfg);
  j.erase("out");
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(j.dump()));
  return buf;
}

TrainOptions train_options(const RunConfig& c) {
  TrainOptions o;
  o.algo = algo_from_string(c.algo);
  o.episodes = c.episodes;
  o.seed = c.seed;
  o.observation.mode = c.observation == "global" ? ObservationMode::Global : ObservationMode::Local;
  o.observation.dnut = !c.disable_dnut;
  o.observation.heading = c.heading;
  o.shaping.enabled = !c.disable_rs;
  o.shaping.base = c.shaping_base;
  o.shaping.key_on_combined = c.shaping_combined;
  o.elite = !c.disable_es;
  o.elite_cap = c.elite_cap;
  o.uncapped_limit = c.uncapped_limit;
  o.random_start = c.random_start;
  o.hidden = c.hidden;
  o.ppo = c.ppo;
  o.dqn = c.dqn;
  return o;
}

}  // namespace sweeprl
