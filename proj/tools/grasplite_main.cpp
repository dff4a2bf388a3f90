// grasplite command-line entry point: train agents, evaluate checkpoints,
// and extract grip synergies from pose datasets.
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grasplite/dist/pool.hpp"
#include "grasplite/errors.hpp"
#include "grasplite/io/checkpoint.hpp"
#include "grasplite/io/metrics.hpp"
#include "grasplite/io/run_config.hpp"
#include "grasplite/kernels/kernels.hpp"
#include "grasplite/rng.hpp"
#include "grasplite/synergy/synergy.hpp"

namespace {

namespace fs = std::filesystem;
using namespace grasplite;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct TrainArgs {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_epochs;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  std::optional<std::string> init_from;
};

io::Checkpoint to_checkpoint(const agent::TrainResult& result) {
  io::Checkpoint ckpt;
  ckpt.actor = result.nets.actor;
  ckpt.critic = result.nets.critic;
  ckpt.target_actor = result.nets.target_actor;
  ckpt.target_critic = result.nets.target_critic;
  ckpt.actor_opt = result.nets.actor_opt;
  ckpt.critic_opt = result.nets.critic_opt;
  ckpt.obs_stats = result.norm.obs;
  ckpt.goal_stats = result.norm.goal;
  ckpt.orient_threshold = result.final_orient_threshold;
  ckpt.final_eval = result.final_success;
  return ckpt;
}

int run_one_training(io::RunConfig cfg, std::uint64_t seed, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  cfg.run.seed = seed;
  io::save_run_config(cfg, (out_dir / "config.json").string());

  std::optional<agent::Networks> init_nets;
  std::optional<agent::Normalizers> init_norm;
  if (!cfg.run.init_from.empty()) {
    const io::Checkpoint ckpt = io::load_checkpoint(cfg.run.init_from);
    init_nets = agent::networks_from_pretrained(ckpt.actor, ckpt.critic);
    init_norm = agent::Normalizers{ckpt.obs_stats, ckpt.goal_stats};
  }

  const env::EnvConfig env_cfg = cfg.env;
  dist::DistConfig dcfg;
  dcfg.workers = cfg.run.workers;
  for (std::size_t rank = 0; rank < dcfg.workers; ++rank) {
    dcfg.seeds.push_back(worker_seed(seed, rank));
  }

  const agent::TrainResult result = dist::train_distributed(
      [&env_cfg]() { return io::make_env(env_cfg); }, cfg.agent, dcfg,
      init_nets ? &*init_nets : nullptr, init_norm ? &*init_norm : nullptr);

  io::write_metrics_csv(result.metrics, (out_dir / "metrics.csv").string());
  io::save_checkpoint(to_checkpoint(result), (out_dir / "checkpoint.bin").string());

  std::printf("seed %llu: %zu epochs, final success %.3f -> %s\n",
              static_cast<unsigned long long>(seed), result.metrics.size(),
              result.final_success, out_dir.string().c_str());
  return kExitOk;
}

int cmd_train(const TrainArgs& args) {
  io::RunConfig cfg;
  try {
    cfg = io::load_run_config(args.config_path);
    if (args.max_epochs) cfg.agent.max_epochs = *args.max_epochs;
    if (args.workers) cfg.run.workers = *args.workers;
    if (args.seed) cfg.run.seed = *args.seed;
    if (args.out_dir) cfg.run.out_dir = *args.out_dir;
    if (args.init_from) cfg.run.init_from = *args.init_from;
    cfg.validate();
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (args.seeds.empty()) {
      return run_one_training(cfg, cfg.run.seed, cfg.run.out_dir);
    }
    for (std::uint64_t seed : args.seeds) {
      const fs::path dir = fs::path(cfg.run.out_dir) / ("seed_" + std::to_string(seed));
      const int rc = run_one_training(cfg, seed, dir);
      if (rc != kExitOk) return rc;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "training failed: %s\n", e.what());
    return kExitRuntime;
  }
}

int cmd_eval(const std::string& checkpoint_path, const std::string& config_path,
             std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) {
    std::fprintf(stderr, "usage error: --episodes must be at least 1\n");
    return kExitUsage;
  }
  io::Checkpoint ckpt;
  try {
    ckpt = io::load_checkpoint(checkpoint_path);
  } catch (const Error& e) {
    std::fprintf(stderr, "checkpoint error: %s\n", e.what());
    return kExitRuntime;
  }
  try {
    const io::RunConfig cfg = io::load_run_config(config_path);
    env::GraspEnv env = io::make_env(cfg.env);
    if (ckpt.actor.spec.input_dim() != env.state_dim() + env.goal_dim() ||
        ckpt.actor.spec.output_dim() != env.action_dim()) {
      std::fprintf(stderr, "config error: checkpoint does not fit this environment\n");
      return kExitUsage;
    }
    env.set_orient_threshold(ckpt.orient_threshold);
    const agent::Normalizers norm{ckpt.obs_stats, ckpt.goal_stats};
    auto rng = make_stream(seed, Stream::eval);
    const double rate = agent::evaluate(env, ckpt.actor, norm, episodes, rng);
    std::printf("%.3f\n", rate);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "evaluation failed: %s\n", e.what());
    return kExitRuntime;
  }
}

int cmd_synergy(const std::string& dataset_path, const std::string& out_dir,
                std::size_t components) {
  try {
    const synergy::Matrix data = synergy::load_pose_dataset(dataset_path);
    synergy::SynergyBasis basis = synergy::fit_pca(data);
    if (components > 0 && components < basis.rank()) {
      basis.components.resize(components);
      basis.singular_values.resize(components);
    } else if (components > basis.rank()) {
      std::fprintf(stderr, "warning: %zu components requested, dataset rank is %zu\n",
                   components, basis.rank());
    }
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    synergy::save_basis(basis, (dir / "basis.json").string());
    synergy::write_explained_variance_csv(synergy::fit_pca(data),
                                          (dir / "explained_variance.csv").string());
    synergy::write_covariance_csv(synergy::export_covariance(data),
                                  (dir / "covariance.csv").string());
    std::printf("%zu samples, %zu joints, kept %zu components -> %s\n", data.rows, data.cols,
                basis.rank(), out_dir.c_str());
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "synergy extraction failed: %s\n", e.what());
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grasplite: goal-conditioned grasp training on kinematic surrogate tasks"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train an agent from a run config");
  train->add_option("--config", train_args.config_path, "run config JSON")->required();
  train->add_option("--seeds", train_args.seeds, "comma-separated seeds for repeat runs")
      ->delimiter(',');
  std::uint64_t seed_flag = 0;
  auto* seed_opt = train->add_option("--seed", seed_flag, "run seed (overrides config)");
  std::size_t max_epochs_flag = 0;
  auto* epochs_opt =
      train->add_option("--max-epochs", max_epochs_flag, "epoch cap (overrides config)");
  std::size_t workers_flag = 0;
  auto* workers_opt =
      train->add_option("--workers", workers_flag, "worker count (overrides config)");
  std::string out_flag, init_flag;
  auto* out_opt = train->add_option("--out", out_flag, "output directory (overrides config)");
  auto* init_opt =
      train->add_option("--init-from", init_flag, "checkpoint to initialize from");

  std::string eval_ckpt, eval_cfg;
  std::size_t eval_episodes = 160;
  std::uint64_t eval_seed = 1;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint with the greedy policy");
  eval->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
  eval->add_option("--config", eval_cfg, "run config JSON (env section is used)")->required();
  eval->add_option("--episodes", eval_episodes, "number of evaluation episodes");
  eval->add_option("--seed", eval_seed, "evaluation seed");

  std::string syn_dataset, syn_out = "synergy_out";
  std::size_t syn_components = 0;
  auto* syn = app.add_subcommand("synergy", "Extract grip synergies from a pose dataset");
  syn->add_option("--dataset", syn_dataset, "joint-angle CSV with a header row")->required();
  syn->add_option("--out", syn_out, "output directory");
  syn->add_option("--components", syn_components, "number of components to keep (0 = all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (train->parsed()) {
    if (seed_opt->count()) train_args.seed = seed_flag;
    if (epochs_opt->count()) train_args.max_epochs = max_epochs_flag;
    if (workers_opt->count()) train_args.workers = workers_flag;
    if (out_opt->count()) train_args.out_dir = out_flag;
    if (init_opt->count()) train_args.init_from = init_flag;
    return cmd_train(train_args);
  }
  if (eval->parsed()) return cmd_eval(eval_ckpt, eval_cfg, eval_episodes, eval_seed);
  if (syn->parsed()) return cmd_synergy(syn_dataset, syn_out, syn_components);
  return kExitUsage;
}
