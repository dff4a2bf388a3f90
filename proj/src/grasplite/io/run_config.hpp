#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "grasplite/agent/config.hpp"
#include "grasplite/env/grasp_env.hpp"

namespace grasplite::io {

struct RunOptions {
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/latest";
  std::string init_from;  // checkpoint path; empty = train from scratch
};

// Full run description: training hyperparameters, environment, execution.
// Parsing rejects unknown keys so typos fail loudly before any work starts.
struct RunConfig {
  agent::AgentConfig agent;
  env::EnvConfig env;
  RunOptions run;

  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);
void save_run_config(const RunConfig& cfg, const std::string& path);

// Builds the environment, loading the synergy basis when one is configured.
env::GraspEnv make_env(const env::EnvConfig& cfg);

}  // namespace grasplite::io
