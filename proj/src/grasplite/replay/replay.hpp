#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace grasplite::replay {

// One complete episode with a fixed horizon T: T+1 states and achieved goals,
// T actions, one desired goal. Episodes are stored whole because hindsight
// relabeling draws replacement goals from later steps of the same episode.
struct EpisodeRecord {
  std::vector<double> states;    // (T+1) x state_dim
  std::vector<double> actions;   // T x action_dim
  std::vector<double> achieved;  // (T+1) x goal_dim
  std::vector<double> goal;      // goal_dim
};

// Sparse reward on goal vectors, evaluated at sampling time so threshold
// changes (orientation curriculum) apply to old experience too.
using RewardFn =
    std::function<double(std::span<const double> achieved_next, std::span<const double> goal)>;

// A sampled minibatch, row-major. `future_index` records the relabeling
// decision per sample (-1 when the original goal was kept); tests use it to
// audit the "future" strategy.
struct HerBatch {
  std::size_t n = 0;
  std::size_t state_dim = 0, action_dim = 0, goal_dim = 0;
  std::vector<double> states;       // n x state_dim
  std::vector<double> actions;      // n x action_dim
  std::vector<double> goals;        // n x goal_dim (possibly relabeled)
  std::vector<double> rewards;      // n
  std::vector<double> next_states;  // n x state_dim
  std::vector<std::uint32_t> episode_index, step_index;
  std::vector<std::int32_t> future_index;
};

// Ring of whole episodes; capacity is given in transitions and the oldest
// episode is evicted first.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity_transitions, std::size_t horizon, std::size_t state_dim,
               std::size_t action_dim, std::size_t goal_dim);

  std::size_t horizon() const { return horizon_; }
  std::size_t size() const { return episodes_stored_ * horizon_; }  // transitions
  std::size_t episode_count() const { return episodes_stored_; }
  std::size_t capacity() const { return capacity_episodes_ * horizon_; }

  // Throws WrongHorizon unless the record holds exactly `horizon` steps.
  void store_episode(EpisodeRecord episode);

  // Uniform over stored transitions. Each sample's goal is replaced with
  // probability k/(k+1) by the achieved goal of a uniformly chosen step
  // >= its own index (at next-state time); rewards are recomputed either way.
  HerBatch sample_her_batch(std::size_t n, double k, const RewardFn& reward,
                            std::mt19937_64& rng) const;

  const EpisodeRecord& episode(std::size_t i) const { return storage_[i]; }

 private:
  std::size_t capacity_episodes_;
  std::size_t horizon_, state_dim_, action_dim_, goal_dim_;
  std::vector<EpisodeRecord> storage_;
  std::size_t next_slot_ = 0;
  std::size_t episodes_stored_ = 0;
};

}  // namespace grasplite::replay
