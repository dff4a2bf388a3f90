#include "grasplite/neural/mlp.hpp"

#include <cmath>

#include "grasplite/errors.hpp"
#include "grasplite/kernels/kernels.hpp"

namespace grasplite::neural {
namespace {

void apply_activation(Activation act, double* v, std::size_t n) {
  switch (act) {
    case Activation::relu:
      for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
      break;
    case Activation::tanh:
      for (std::size_t i = 0; i < n; ++i) v[i] = std::tanh(v[i]);
      break;
    case Activation::identity:
      break;
  }
}

// Derivative from the post-activation value, in place on the gradient.
void apply_activation_grad(Activation act, const double* y, double* g, std::size_t n) {
  switch (act) {
    case Activation::relu:
      for (std::size_t i = 0; i < n; ++i) g[i] = y[i] > 0.0 ? g[i] : 0.0;
      break;
    case Activation::tanh:
      for (std::size_t i = 0; i < n; ++i) g[i] *= 1.0 - y[i] * y[i];
      break;
    case Activation::identity:
      break;
  }
}

}  // namespace

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) n += dims[l] * dims[l + 1] + dims[l + 1];
  return n;
}

std::size_t MlpSpec::weight_offset(std::size_t l) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < l; ++i) off += dims[i] * dims[i + 1] + dims[i + 1];
  return off;
}

std::size_t MlpSpec::bias_offset(std::size_t l) const {
  return weight_offset(l) + dims[l] * dims[l + 1];
}

void MlpSpec::validate() const {
  if (dims.size() < 2 || acts.size() != dims.size() - 1) {
    throw DimensionMismatch("mlp spec needs n+1 widths for n layers");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw DimensionMismatch("mlp layer width must be positive");
  }
}

MlpParams make_mlp(MlpSpec spec, std::mt19937_64& rng, double final_layer_scale) {
  spec.validate();
  MlpParams p{std::move(spec), {}};
  p.data.resize(p.spec.param_count());
  for (std::size_t l = 0; l < p.spec.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.spec.dims[l]));
    std::uniform_real_distribution<double> uni(-bound, bound);
    const double s = (l + 1 == p.spec.layer_count()) ? final_layer_scale : 1.0;
    const std::size_t count = p.spec.dims[l] * p.spec.dims[l + 1] + p.spec.dims[l + 1];
    double* block = p.data.data() + p.spec.weight_offset(l);
    for (std::size_t i = 0; i < count; ++i) block[i] = s * uni(rng);
  }
  return p;
}

void mlp_forward(const MlpParams& p, const double* x, std::size_t n, BatchCache& cache) {
  const MlpSpec& spec = p.spec;
  const std::size_t layers = spec.layer_count();
  cache.batch = n;
  cache.act.resize(layers + 1);
  cache.act[0].assign(x, x + n * spec.dims[0]);
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec.dims[l];
    const std::size_t out = spec.dims[l + 1];
    cache.act[l + 1].resize(n * out);
    const double* src = cache.act[l].data();
    double* dst = cache.act[l + 1].data();
    for (std::size_t row = 0; row < n; ++row) {
      kernels::matvec(p.w(l), out, in, src + row * in, p.b(l), dst + row * out);
    }
    apply_activation(spec.acts[l], dst, n * out);
  }
}

std::vector<double> mlp_forward(const MlpParams& p, std::span<const double> x,
                                BatchCache& cache) {
  if (x.size() != p.spec.input_dim()) {
    throw DimensionMismatch("mlp input size does not match the first layer");
  }
  mlp_forward(p, x.data(), 1, cache);
  return cache.act.back();
}

void mlp_backward(const MlpParams& p, const BatchCache& cache, const double* output_grad,
                  std::size_t n, std::vector<double>* param_grads, double* input_grad) {
  const MlpSpec& spec = p.spec;
  if (cache.batch != n || cache.act.size() != spec.layer_count() + 1) {
    throw DimensionMismatch("backward cache does not match this forward pass");
  }
  if (param_grads && param_grads->size() != spec.param_count()) {
    throw DimensionMismatch("param gradient buffer has the wrong size");
  }

  static thread_local std::vector<double> cur, next;
  cur.assign(output_grad, output_grad + n * spec.output_dim());

  for (std::size_t l = spec.layer_count(); l-- > 0;) {
    const std::size_t in = spec.dims[l];
    const std::size_t out = spec.dims[l + 1];
    apply_activation_grad(spec.acts[l], cache.act[l + 1].data(), cur.data(), n * out);

    if (param_grads) {
      double* wg = param_grads->data() + spec.weight_offset(l);
      double* bg = param_grads->data() + spec.bias_offset(l);
      const double* src = cache.act[l].data();
      for (std::size_t row = 0; row < n; ++row) {
        const double* g = cur.data() + row * out;
        kernels::rank1_acc(g, out, src + row * in, in, wg);
        kernels::axpy(1.0, g, bg, out);
      }
    }

    const bool need_input = l > 0 || input_grad != nullptr;
    if (!need_input) break;
    next.assign(n * in, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
      kernels::matvec_t_acc(p.w(l), out, in, cur.data() + row * out, next.data() + row * in);
    }
    std::swap(cur, next);
  }
  if (input_grad) {
    std::copy(cur.begin(), cur.end(), input_grad);
  }
}

}  // namespace grasplite::neural
