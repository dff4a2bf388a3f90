#include "grasplite/neural/actor_critic.hpp"

#include "grasplite/errors.hpp"

namespace grasplite::neural {

ActorOutput split_action(std::span<const double> action, const ActionLayout& layout) {
  if (action.size() != layout.total()) {
    throw DimensionMismatch("action vector does not match the head layout");
  }
  return ActorOutput{action.subspan(0, layout.translation),
                     action.subspan(layout.orientation_offset(), layout.orientation),
                     action.subspan(layout.grip_offset(), layout.grip)};
}

MlpSpec actor_spec(std::size_t state_dim, std::size_t goal_dim, const ActionLayout& layout,
                   std::span<const std::size_t> hidden) {
  MlpSpec spec;
  spec.dims.push_back(state_dim + goal_dim);
  spec.dims.insert(spec.dims.end(), hidden.begin(), hidden.end());
  spec.dims.push_back(layout.total());
  spec.acts.assign(hidden.size(), Activation::relu);
  spec.acts.push_back(Activation::tanh);
  spec.validate();
  return spec;
}

MlpSpec critic_spec(std::size_t state_dim, std::size_t goal_dim, std::size_t action_dim,
                    std::span<const std::size_t> hidden) {
  MlpSpec spec;
  spec.dims.push_back(state_dim + goal_dim + action_dim);
  spec.dims.insert(spec.dims.end(), hidden.begin(), hidden.end());
  spec.dims.push_back(1);
  spec.acts.assign(hidden.size(), Activation::relu);
  spec.acts.push_back(Activation::identity);
  spec.validate();
  return spec;
}

std::vector<double> actor_forward(const MlpParams& actor, std::span<const double> state,
                                  std::span<const double> goal) {
  if (state.size() + goal.size() != actor.spec.input_dim()) {
    throw DimensionMismatch("actor input does not match (state, goal) widths");
  }
  static thread_local std::vector<double> input;
  static thread_local BatchCache cache;
  input.assign(state.begin(), state.end());
  input.insert(input.end(), goal.begin(), goal.end());
  mlp_forward(actor, input.data(), 1, cache);
  return cache.act.back();
}

double critic_forward(const MlpParams& critic, std::span<const double> state,
                      std::span<const double> goal, std::span<const double> action) {
  if (state.size() + goal.size() + action.size() != critic.spec.input_dim()) {
    throw DimensionMismatch("critic input does not match (state, goal, action) widths");
  }
  static thread_local std::vector<double> input;
  static thread_local BatchCache cache;
  input.assign(state.begin(), state.end());
  input.insert(input.end(), goal.begin(), goal.end());
  input.insert(input.end(), action.begin(), action.end());
  mlp_forward(critic, input.data(), 1, cache);
  return cache.act.back()[0];
}

}  // namespace grasplite::neural
