#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grasplite/neural/mlp.hpp"

namespace grasplite::neural {

// Slices of the flat action vector. The actor's last layer is one affine+tanh
// map onto the concatenated heads, which is equivalent to three parallel
// heads on a shared trunk (each output row is independent).
struct ActionLayout {
  std::size_t translation = 3;
  std::size_t orientation = 6;
  std::size_t grip = 1;

  std::size_t total() const { return translation + orientation + grip; }
  std::size_t orientation_offset() const { return translation; }
  std::size_t grip_offset() const { return translation + orientation; }
};

// Views into one action vector.
struct ActorOutput {
  std::span<const double> translation;
  std::span<const double> orientation;
  std::span<const double> grip;
};

ActorOutput split_action(std::span<const double> action, const ActionLayout& layout);

// Actor maps (normalized state, goal) to a tanh-bounded action.
MlpSpec actor_spec(std::size_t state_dim, std::size_t goal_dim, const ActionLayout& layout,
                   std::span<const std::size_t> hidden);
// Critic maps (normalized state, goal, action) to an unbounded scalar.
MlpSpec critic_spec(std::size_t state_dim, std::size_t goal_dim, std::size_t action_dim,
                    std::span<const std::size_t> hidden);

std::vector<double> actor_forward(const MlpParams& actor, std::span<const double> state,
                                  std::span<const double> goal);
double critic_forward(const MlpParams& critic, std::span<const double> state,
                      std::span<const double> goal, std::span<const double> action);

}  // namespace grasplite::neural
