#include "grasplite/agent/trainer.hpp"

#include <chrono>

#include "grasplite/rng.hpp"

namespace grasplite::agent {
namespace {

void collect_episode(env::GraspEnv& env, const Networks& nets, const Normalizers& norm,
                     const AgentConfig& cfg, std::mt19937_64& env_rng,
                     std::mt19937_64& noise_rng, replay::ReplayBuffer& buffer,
                     normalizer::RunningStats& obs_delta,
                     normalizer::RunningStats& goal_delta) {
  env.reset(env_rng);
  replay::EpisodeRecord rec;
  const std::size_t s_dim = env.state_dim();
  const std::size_t g_dim = env.goal_dim();
  rec.states.reserve((env::kHorizon + 1) * s_dim);
  rec.achieved.reserve((env::kHorizon + 1) * g_dim);
  rec.actions.reserve(env::kHorizon * env.action_dim());

  std::vector<double> obs = env.observe();
  rec.goal = env.goal_vector();
  rec.states.insert(rec.states.end(), obs.begin(), obs.end());
  auto ag = env.achieved_goal();
  rec.achieved.insert(rec.achieved.end(), ag.begin(), ag.end());

  for (std::size_t t = 0; t < env::kHorizon; ++t) {
    const std::vector<double> action =
        select_action(nets.actor, norm, obs, rec.goal, cfg, noise_rng, /*explore=*/true);
    env.step(action);
    rec.actions.insert(rec.actions.end(), action.begin(), action.end());
    obs = env.observe();
    rec.states.insert(rec.states.end(), obs.begin(), obs.end());
    ag = env.achieved_goal();
    rec.achieved.insert(rec.achieved.end(), ag.begin(), ag.end());
  }

  obs_delta.update_batch(rec.states.data(), env::kHorizon + 1);
  goal_delta.update(rec.goal);
  // Achieved goals feed the goal stats too: relabeled goals are drawn from
  // this distribution.
  for (std::size_t t = 1; t <= env::kHorizon; ++t) {
    goal_delta.update(std::span<const double>(rec.achieved.data() + t * g_dim, g_dim));
  }
  buffer.store_episode(std::move(rec));
}

}  // namespace

TrainResult train_loop(env::GraspEnv env, const AgentConfig& cfg, Networks nets,
                       Normalizers norm, std::uint64_t seed, SyncHooks& hooks) {
  cfg.validate();
  auto env_rng = make_stream(seed, Stream::env);
  auto noise_rng = make_stream(seed, Stream::noise);
  auto replay_rng = make_stream(seed, Stream::replay);
  auto eval_rng = make_stream(seed, Stream::eval);

  env::GraspEnv eval_env = env;

  replay::ReplayBuffer buffer(cfg.replay_capacity, env::kHorizon, env.state_dim(),
                              env.action_dim(), env.goal_dim());
  normalizer::RunningStats obs_delta(env.state_dim(), env.state_mask());
  normalizer::RunningStats goal_delta(env.goal_dim(), env.goal_mask());

  const bool curriculum_active = env.has_orientation_goal();
  CurriculumState curriculum{env.config().orient_threshold_init,
                             env.config().orient_threshold_min, cfg.curriculum_shrink,
                             cfg.curriculum_trigger};
  env.set_orient_threshold(curriculum.threshold);

  const replay::RewardFn reward_fn = [&env](std::span<const double> achieved,
                                            std::span<const double> goal) {
    return env.reward(achieved, goal);
  };

  TrainResult result;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double critic_loss_sum = 0.0, actor_loss_sum = 0.0;
    std::size_t passes = 0;
    const double epoch_threshold = curriculum.threshold;

    for (std::size_t cycle = 0; cycle < cfg.cycles; ++cycle) {
      for (std::size_t r = 0; r < cfg.rollouts; ++r) {
        collect_episode(env, nets, norm, cfg, env_rng, noise_rng, buffer, obs_delta,
                        goal_delta);
        result.transitions_collected += env::kHorizon;
      }
      hooks.sync_stats(obs_delta, goal_delta);
      norm.obs.merge_with(obs_delta);
      norm.goal.merge_with(goal_delta);
      obs_delta.reset();
      goal_delta.reset();

      for (std::size_t u = 0; u < cfg.train_epochs; ++u) {
        const replay::HerBatch batch =
            buffer.sample_her_batch(cfg.batch_size, cfg.her_k, reward_fn, replay_rng);
        UpdateOutput out = update_step(nets, norm, batch, cfg, env.action_layout());
        hooks.reduce_gradients(out.critic_grads);
        hooks.reduce_gradients(out.actor_grads);
        neural::adam_step(nets.critic, out.critic_grads, nets.critic_opt, cfg.lr_critic);
        neural::adam_step(nets.actor, out.actor_grads, nets.actor_opt, cfg.lr_actor);
        critic_loss_sum += out.critic_loss;
        actor_loss_sum += out.actor_loss;
        ++passes;
      }
      neural::polyak_update(nets.target_critic, nets.critic, cfg.tau);
      neural::polyak_update(nets.target_actor, nets.actor, cfg.tau);
    }

    SyncHooks::EpochSync sync;
    sync.threshold = curriculum.threshold;
    if (hooks.is_root()) {
      eval_env.set_orient_threshold(curriculum.threshold);
      sync.success = evaluate(eval_env, nets.actor, norm, cfg.eval_episodes, eval_rng);
      if (curriculum_active) {
        curriculum = curriculum_update(curriculum, sync.success);
        sync.threshold = curriculum.threshold;
      }
      sync.stop = sync.success >= cfg.early_stop;
    }
    hooks.epoch_end(sync);
    curriculum.threshold = sync.threshold;
    env.set_orient_threshold(sync.threshold);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.metrics.push_back(EpochMetrics{
        epoch, sync.success, passes ? critic_loss_sum / static_cast<double>(passes) : 0.0,
        passes ? actor_loss_sum / static_cast<double>(passes) : 0.0,
        curriculum_active ? epoch_threshold : 0.0, wall});
    result.final_success = sync.success;

    hooks.after_epoch(nets);
    if (sync.stop) break;
  }

  result.final_orient_threshold = curriculum.threshold;
  result.nets = std::move(nets);
  result.norm = std::move(norm);
  return result;
}

Networks networks_from_pretrained(const neural::MlpParams& actor,
                                  const neural::MlpParams& critic) {
  Networks nets;
  nets.actor = actor;
  nets.critic = critic;
  nets.target_actor = actor;
  nets.target_critic = critic;
  nets.actor_opt = neural::AdamState::for_params(nets.actor);
  nets.critic_opt = neural::AdamState::for_params(nets.critic);
  return nets;
}

TrainResult run_training(const env::GraspEnv& env, const AgentConfig& cfg, std::uint64_t seed,
                         const Networks* init_nets, const Normalizers* init_norm) {
  auto net_rng = make_stream(seed, Stream::net_init);
  Networks nets = init_nets ? *init_nets : make_networks(env, cfg, net_rng);
  Normalizers norm = init_norm ? *init_norm : make_normalizers(env);
  SyncHooks hooks;
  return train_loop(env, cfg, std::move(nets), std::move(norm), seed, hooks);
}

}  // namespace grasplite::agent
