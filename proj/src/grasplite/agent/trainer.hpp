#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grasplite/agent/agent.hpp"

namespace grasplite::agent {

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double success_rate = 0.0;
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double orient_threshold = 0.0;  // 0 for tasks without an orientation goal
  double wall_seconds = 0.0;
};

struct TrainResult {
  Networks nets;
  Normalizers norm;
  std::vector<EpochMetrics> metrics;
  double final_success = 0.0;
  double final_orient_threshold = 0.0;
  std::size_t transitions_collected = 0;
};

// Synchronization points of the training loop. The default implementation is
// the single-worker identity; the distributed pool overrides each hook with a
// barrier + fixed-order reduction, which keeps every worker's parameters
// bit-identical between barriers.
class SyncHooks {
 public:
  virtual ~SyncHooks() = default;

  struct EpochSync {
    double success = 0.0;
    double threshold = 0.0;
    bool stop = false;
  };

  virtual bool is_root() const { return true; }
  // In-place cross-worker mean of one flat gradient vector.
  virtual void reduce_gradients(std::span<double> grads) { (void)grads; }
  // Replaces each worker's stats delta by the fold over all workers.
  virtual void sync_stats(normalizer::RunningStats& obs_delta,
                          normalizer::RunningStats& goal_delta) {
    (void)obs_delta;
    (void)goal_delta;
  }
  // Root publishes evaluation outcome and curriculum decision; everyone
  // leaves with the root's values.
  virtual void epoch_end(EpochSync& sync) { (void)sync; }
  // Post-epoch hook (used to assert cross-worker parameter equality).
  virtual void after_epoch(const Networks& nets) { (void)nets; }
};

// The full rollout/optimize loop for one worker. `seed` drives this worker's
// env, exploration and replay streams (and, on the root, evaluation).
TrainResult train_loop(env::GraspEnv env, const AgentConfig& cfg, Networks nets,
                       Normalizers norm, std::uint64_t seed, SyncHooks& hooks);

// Single-worker training; fresh networks unless `init_nets`/`init_norm` are
// given (checkpoint reuse: targets reset to the online nets, Adam reset).
TrainResult run_training(const env::GraspEnv& env, const AgentConfig& cfg, std::uint64_t seed,
                         const Networks* init_nets = nullptr,
                         const Normalizers* init_norm = nullptr);

// Network bundle for resuming from pre-trained actor/critic parameters.
Networks networks_from_pretrained(const neural::MlpParams& actor,
                                  const neural::MlpParams& critic);

}  // namespace grasplite::agent
