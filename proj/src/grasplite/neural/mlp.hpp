#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace grasplite::neural {

enum class Activation { relu, tanh, identity };

// Layer widths (dims[0] is the input width) and one activation per layer.
struct MlpSpec {
  std::vector<std::size_t> dims;
  std::vector<Activation> acts;

  std::size_t layer_count() const { return acts.size(); }
  std::size_t input_dim() const { return dims.front(); }
  std::size_t output_dim() const { return dims.back(); }
  std::size_t param_count() const;
  // Offset of layer l's weight block in the flat parameter vector; the bias
  // block follows immediately after the weights.
  std::size_t weight_offset(std::size_t l) const;
  std::size_t bias_offset(std::size_t l) const;
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

// All weights and biases in one flat vector, so optimizer steps, target
// mixing and gradient reductions are single passes over contiguous memory.
// Layout: [W0 (out x in, row-major), b0, W1, b1, ...].
struct MlpParams {
  MlpSpec spec;
  std::vector<double> data;

  double* w(std::size_t l) { return data.data() + spec.weight_offset(l); }
  const double* w(std::size_t l) const { return data.data() + spec.weight_offset(l); }
  double* b(std::size_t l) { return data.data() + spec.bias_offset(l); }
  const double* b(std::size_t l) const { return data.data() + spec.bias_offset(l); }
};

// Uniform +-1/sqrt(fan_in) init; the last layer is scaled down by
// final_layer_scale so fresh policies start near the zero action and fresh
// critics near zero value.
MlpParams make_mlp(MlpSpec spec, std::mt19937_64& rng, double final_layer_scale = 1.0);

// Post-activation values per layer for a whole batch; act[0] is the input.
// Buffers are reused across calls to keep the training loop allocation-free.
struct BatchCache {
  std::size_t batch = 0;
  std::vector<std::vector<double>> act;

  const double* output() const { return act.back().data(); }
};

// Forward pass for a row-major batch x of shape n x input_dim.
void mlp_forward(const MlpParams& p, const double* x, std::size_t n, BatchCache& cache);

// Single-sample convenience used by rollouts and tests.
std::vector<double> mlp_forward(const MlpParams& p, std::span<const double> x,
                                BatchCache& cache);

// Reverse-mode gradients for the batch that produced `cache`. output_grad is
// n x output_dim. Accumulates into param_grads (flat, param_count-sized) when
// non-null; writes input gradients (n x input_dim) when input_grad is
// non-null.
void mlp_backward(const MlpParams& p, const BatchCache& cache, const double* output_grad,
                  std::size_t n, std::vector<double>* param_grads, double* input_grad);

}  // namespace grasplite::neural
