#include "grasplite/replay/replay.hpp"

#include <algorithm>

#include "grasplite/errors.hpp"

namespace grasplite::replay {

ReplayBuffer::ReplayBuffer(std::size_t capacity_transitions, std::size_t horizon,
                           std::size_t state_dim, std::size_t action_dim,
                           std::size_t goal_dim)
    : capacity_episodes_(std::max<std::size_t>(1, capacity_transitions / horizon)),
      horizon_(horizon),
      state_dim_(state_dim),
      action_dim_(action_dim),
      goal_dim_(goal_dim) {
  if (horizon == 0) throw WrongHorizon("replay horizon must be positive");
  storage_.resize(capacity_episodes_);
}

void ReplayBuffer::store_episode(EpisodeRecord episode) {
  const bool ok = episode.states.size() == (horizon_ + 1) * state_dim_ &&
                  episode.actions.size() == horizon_ * action_dim_ &&
                  episode.achieved.size() == (horizon_ + 1) * goal_dim_ &&
                  episode.goal.size() == goal_dim_;
  if (!ok) throw WrongHorizon("episode does not hold exactly the fixed horizon");
  storage_[next_slot_] = std::move(episode);
  next_slot_ = (next_slot_ + 1) % capacity_episodes_;
  episodes_stored_ = std::min(episodes_stored_ + 1, capacity_episodes_);
}

HerBatch ReplayBuffer::sample_her_batch(std::size_t n, double k, const RewardFn& reward,
                                        std::mt19937_64& rng) const {
  if (episodes_stored_ == 0) throw EmptyBuffer("cannot sample from an empty replay buffer");

  HerBatch batch;
  batch.n = n;
  batch.state_dim = state_dim_;
  batch.action_dim = action_dim_;
  batch.goal_dim = goal_dim_;
  batch.states.resize(n * state_dim_);
  batch.actions.resize(n * action_dim_);
  batch.goals.resize(n * goal_dim_);
  batch.rewards.resize(n);
  batch.next_states.resize(n * state_dim_);
  batch.episode_index.resize(n);
  batch.step_index.resize(n);
  batch.future_index.resize(n);

  std::uniform_int_distribution<std::size_t> pick_episode(0, episodes_stored_ - 1);
  std::uniform_int_distribution<std::size_t> pick_step(0, horizon_ - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double relabel_prob = k / (k + 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = pick_episode(rng);
    const std::size_t t = pick_step(rng);
    const EpisodeRecord& ep = storage_[e];

    std::copy_n(ep.states.begin() + t * state_dim_, state_dim_,
                batch.states.begin() + i * state_dim_);
    std::copy_n(ep.states.begin() + (t + 1) * state_dim_, state_dim_,
                batch.next_states.begin() + i * state_dim_);
    std::copy_n(ep.actions.begin() + t * action_dim_, action_dim_,
                batch.actions.begin() + i * action_dim_);

    std::int32_t future = -1;
    const double* goal = ep.goal.data();
    if (k > 0.0 && coin(rng) < relabel_prob) {
      // "future" strategy: a uniform later step of the same episode,
      // including the transition's own next step.
      std::uniform_int_distribution<std::size_t> pick_future(t, horizon_ - 1);
      future = static_cast<std::int32_t>(pick_future(rng));
      goal = ep.achieved.data() + (future + 1) * goal_dim_;
    }
    std::copy_n(goal, goal_dim_, batch.goals.begin() + i * goal_dim_);

    const double* achieved_next = ep.achieved.data() + (t + 1) * goal_dim_;
    batch.rewards[i] = reward(std::span<const double>(achieved_next, goal_dim_),
                              std::span<const double>(goal, goal_dim_));
    batch.episode_index[i] = static_cast<std::uint32_t>(e);
    batch.step_index[i] = static_cast<std::uint32_t>(t);
    batch.future_index[i] = future;
  }
  return batch;
}

}  // namespace grasplite::replay
