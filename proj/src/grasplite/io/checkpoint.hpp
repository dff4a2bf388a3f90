#pragma once

#include <cstdint>
#include <string>

#include "grasplite/neural/optim.hpp"
#include "grasplite/normalizer/normalizer.hpp"

namespace grasplite::io {

// Versioned binary snapshot of a training run: network shapes and parameters,
// optimizer moments, normalizer stats, curriculum threshold and the final
// evaluation. 64-bit floats are written raw (native little-endian), so
// save/load round-trips are bit-exact.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  neural::MlpParams actor, critic, target_actor, target_critic;
  neural::AdamState actor_opt, critic_opt;
  normalizer::RunningStats obs_stats, goal_stats;
  double orient_threshold = 0.0;
  double final_eval = 0.0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace grasplite::io
