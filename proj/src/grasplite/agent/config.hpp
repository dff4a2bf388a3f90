#pragma once

#include <cstddef>
#include <vector>

namespace grasplite::agent {

// Training hyperparameters. Loop structure per epoch: `cycles` x (`rollouts`
// collected episodes + `train_epochs` optimizer passes), one target-network
// update per cycle, one evaluation per epoch.
struct AgentConfig {
  double gamma = 0.98;
  double tau = 0.05;
  double epsilon = 0.3;  // probability of a uniform random action
  double noise_mu = 0.0;
  double noise_sigma = 0.2;
  double lr_actor = 0.001;
  double lr_critic = 0.001;
  std::size_t batch_size = 256;
  std::size_t cycles = 50;
  std::size_t rollouts = 2;
  std::size_t train_epochs = 40;
  double her_k = 4.0;
  double clip_target_lo = -200.0;
  double clip_target_hi = 200.0;
  double early_stop = 0.95;
  std::size_t max_epochs = 50;
  double lambda_reg = 0.01;  // saturation penalty weight on the orientation head
  std::vector<std::size_t> hidden = {64, 64, 64};
  std::size_t eval_episodes = 160;
  double curriculum_trigger = 0.75;
  double curriculum_shrink = 1.25;
  std::size_t replay_capacity = 1'000'000;

  void validate() const;
};

}  // namespace grasplite::agent
