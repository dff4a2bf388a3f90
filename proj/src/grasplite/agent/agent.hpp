#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "grasplite/agent/config.hpp"
#include "grasplite/env/grasp_env.hpp"
#include "grasplite/neural/actor_critic.hpp"
#include "grasplite/neural/optim.hpp"
#include "grasplite/normalizer/normalizer.hpp"
#include "grasplite/replay/replay.hpp"

namespace grasplite::agent {

// Online nets, their slow-moving target copies, and optimizer state.
struct Networks {
  neural::MlpParams actor, critic, target_actor, target_critic;
  neural::AdamState actor_opt, critic_opt;
};

struct Normalizers {
  normalizer::RunningStats obs, goal;
};

// Fresh networks sized for the env; targets start as copies of the online
// nets.
Networks make_networks(const env::GraspEnv& env, const AgentConfig& cfg,
                       std::mt19937_64& rng);
Normalizers make_normalizers(const env::GraspEnv& env);

// Orientation-tolerance schedule: shrink by `shrink` whenever the success
// rate reaches `trigger`, never below `floor`.
struct CurriculumState {
  double threshold = M_PI;
  double floor = 0.2;
  double shrink = 1.25;
  double trigger = 0.75;
};

CurriculumState curriculum_update(CurriculumState c, double success);

// Exploration policy: with probability epsilon a uniform action in
// [-1, 1]^d, otherwise the actor output plus Gaussian noise, clipped to the
// action box. explore=false returns the raw (greedy) actor output.
std::vector<double> select_action(const neural::MlpParams& actor, const Normalizers& norm,
                                  std::span<const double> state, std::span<const double> goal,
                                  const AgentConfig& cfg, std::mt19937_64& rng, bool explore);

// y_i = clip(r_i + gamma * Q'(s_{i+1}, g_i, pi'(s_{i+1}, g_i)), lo, hi)
std::vector<double> compute_targets(const replay::HerBatch& batch,
                                    const neural::MlpParams& target_actor,
                                    const neural::MlpParams& target_critic,
                                    const Normalizers& norm, double gamma, double clip_lo,
                                    double clip_hi);

struct UpdateOutput {
  std::vector<double> critic_grads, actor_grads;  // flat, parameter-sized
  double critic_loss = 0.0;
  double actor_loss = 0.0;
};

// One optimizer pass worth of gradients: squared TD error for the critic,
// -Q(s, g, pi(s, g)) plus the saturation penalty on the orientation head for
// the actor. Gradients are returned (not applied) so a distributed caller
// can average them across workers first.
UpdateOutput update_step(const Networks& nets, const Normalizers& norm,
                         const replay::HerBatch& batch, const AgentConfig& cfg,
                         const neural::ActionLayout& layout);

using Policy =
    std::function<std::vector<double>(std::span<const double> state, std::span<const double> goal)>;

// Fraction of episodes whose final step satisfies the goal condition.
double evaluate_policy(env::GraspEnv& env, const Policy& policy, std::size_t episodes,
                       std::mt19937_64& rng);
double evaluate(env::GraspEnv& env, const neural::MlpParams& actor, const Normalizers& norm,
                std::size_t episodes, std::mt19937_64& rng);

// Normalize-if-initialized: raw passthrough while the stats are empty (the
// very first rollouts of a run).
std::vector<double> normalized_or_raw(const normalizer::RunningStats& st,
                                      std::span<const double> v);

}  // namespace grasplite::agent
