#include "grasplite/io/run_config.hpp"

#include <fstream>
#include <set>

#include "grasplite/errors.hpp"

namespace grasplite::io {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& section) {
  if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in config section '" + section +
                        "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void read_agent(const json& j, agent::AgentConfig& a) {
  reject_unknown(j, {"gamma", "tau", "epsilon", "noise_mu", "noise_sigma", "lr_actor",
                     "lr_critic", "batch_size", "cycles", "rollouts", "train_epochs", "her_k",
                     "clip_target", "early_stop", "max_epochs", "lambda_reg", "hidden",
                     "eval_episodes", "curriculum_trigger", "curriculum_shrink",
                     "replay_capacity"},
                 "agent");
  read(j, "gamma", a.gamma);
  read(j, "tau", a.tau);
  read(j, "epsilon", a.epsilon);
  read(j, "noise_mu", a.noise_mu);
  read(j, "noise_sigma", a.noise_sigma);
  read(j, "lr_actor", a.lr_actor);
  read(j, "lr_critic", a.lr_critic);
  read(j, "batch_size", a.batch_size);
  read(j, "cycles", a.cycles);
  read(j, "rollouts", a.rollouts);
  read(j, "train_epochs", a.train_epochs);
  read(j, "her_k", a.her_k);
  if (j.contains("clip_target")) {
    const auto clip = j.at("clip_target");
    if (!clip.is_array() || clip.size() != 2) {
      throw ConfigError("clip_target must be [lo, hi]");
    }
    a.clip_target_lo = clip[0].get<double>();
    a.clip_target_hi = clip[1].get<double>();
  }
  read(j, "early_stop", a.early_stop);
  read(j, "max_epochs", a.max_epochs);
  read(j, "lambda_reg", a.lambda_reg);
  read(j, "hidden", a.hidden);
  read(j, "eval_episodes", a.eval_episodes);
  read(j, "curriculum_trigger", a.curriculum_trigger);
  read(j, "curriculum_shrink", a.curriculum_shrink);
  read(j, "replay_capacity", a.replay_capacity);
}

void read_env(const json& j, env::EnvConfig& e) {
  reject_unknown(j, {"task", "gripper", "object", "orientation_head", "synergy_dim",
                     "synergy_basis", "pos_threshold", "orient_threshold_init",
                     "orient_threshold_min", "push"},
                 "env");
  std::string s;
  if (j.contains("task")) {
    read(j, "task", s);
    e.task = env::task_from_string(s);
  }
  if (j.contains("gripper")) {
    read(j, "gripper", s);
    e.gripper = env::gripper_from_string(s);
  }
  if (j.contains("object")) {
    read(j, "object", s);
    e.object = env::object_from_string(s);
  }
  if (j.contains("orientation_head")) {
    read(j, "orientation_head", s);
    e.orientation_head = env::orientation_head_from_string(s);
  }
  read(j, "synergy_dim", e.synergy_dim);
  read(j, "synergy_basis", e.synergy_basis);
  read(j, "pos_threshold", e.pos_threshold);
  read(j, "orient_threshold_init", e.orient_threshold_init);
  read(j, "orient_threshold_min", e.orient_threshold_min);
  read(j, "push", e.push);
}

void read_run(const json& j, RunOptions& r) {
  reject_unknown(j, {"workers", "seed", "out_dir", "init_from"}, "run");
  read(j, "workers", r.workers);
  read(j, "seed", r.seed);
  read(j, "out_dir", r.out_dir);
  read(j, "init_from", r.init_from);
}

}  // namespace

void RunConfig::validate() const {
  agent.validate();
  if (run.workers == 0) throw ConfigError("workers must be at least 1");
  if (env.pos_threshold <= 0.0) throw ConfigError("pos_threshold must be positive");
  if (env.orient_threshold_min <= 0.0 || env.orient_threshold_init < env.orient_threshold_min) {
    throw ConfigError("orientation thresholds must satisfy 0 < min <= init");
  }
  if (env.synergy_dim > 0 && env.synergy_basis.empty()) {
    throw ConfigError("synergy_dim > 0 requires a synergy_basis file");
  }
}

RunConfig parse_run_config(const nlohmann::json& j) {
  reject_unknown(j, {"agent", "env", "run"}, "<top>");
  RunConfig cfg;
  if (j.contains("agent")) read_agent(j.at("agent"), cfg.agent);
  if (j.contains("env")) read_env(j.at("env"), cfg.env);
  if (j.contains("run")) read_run(j.at("run"), cfg.run);
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
  json j;
  j["agent"] = {{"gamma", cfg.agent.gamma},
                {"tau", cfg.agent.tau},
                {"epsilon", cfg.agent.epsilon},
                {"noise_mu", cfg.agent.noise_mu},
                {"noise_sigma", cfg.agent.noise_sigma},
                {"lr_actor", cfg.agent.lr_actor},
                {"lr_critic", cfg.agent.lr_critic},
                {"batch_size", cfg.agent.batch_size},
                {"cycles", cfg.agent.cycles},
                {"rollouts", cfg.agent.rollouts},
                {"train_epochs", cfg.agent.train_epochs},
                {"her_k", cfg.agent.her_k},
                {"clip_target", {cfg.agent.clip_target_lo, cfg.agent.clip_target_hi}},
                {"early_stop", cfg.agent.early_stop},
                {"max_epochs", cfg.agent.max_epochs},
                {"lambda_reg", cfg.agent.lambda_reg},
                {"hidden", cfg.agent.hidden},
                {"eval_episodes", cfg.agent.eval_episodes},
                {"curriculum_trigger", cfg.agent.curriculum_trigger},
                {"curriculum_shrink", cfg.agent.curriculum_shrink},
                {"replay_capacity", cfg.agent.replay_capacity}};
  j["env"] = {{"task", env::to_string(cfg.env.task)},
              {"gripper", env::to_string(cfg.env.gripper)},
              {"object", env::to_string(cfg.env.object)},
              {"orientation_head", env::to_string(cfg.env.orientation_head)},
              {"synergy_dim", cfg.env.synergy_dim},
              {"synergy_basis", cfg.env.synergy_basis},
              {"pos_threshold", cfg.env.pos_threshold},
              {"orient_threshold_init", cfg.env.orient_threshold_init},
              {"orient_threshold_min", cfg.env.orient_threshold_min},
              {"push", cfg.env.push}};
  j["run"] = {{"workers", cfg.run.workers},
              {"seed", cfg.run.seed},
              {"out_dir", cfg.run.out_dir},
              {"init_from", cfg.run.init_from}};
  return j;
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open config snapshot for writing: " + path);
  out << to_json(cfg).dump(2) << "\n";
}

env::GraspEnv make_env(const env::EnvConfig& cfg) {
  std::optional<synergy::SynergyBasis> basis;
  if (cfg.synergy_dim > 0) {
    basis = synergy::load_basis(cfg.synergy_basis);
  }
  return env::GraspEnv(cfg, std::move(basis));
}

}  // namespace grasplite::io
