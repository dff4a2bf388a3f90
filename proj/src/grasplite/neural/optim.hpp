#pragma once

#include <cstdint>
#include <vector>

#include "grasplite/neural/mlp.hpp"

namespace grasplite::neural {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment accumulators mirroring one flat parameter vector.
struct AdamState {
  std::vector<double> m, v;
  std::uint64_t step = 0;

  static AdamState for_params(const MlpParams& p) {
    return AdamState{std::vector<double>(p.data.size(), 0.0),
                     std::vector<double>(p.data.size(), 0.0), 0};
  }
};

void adam_step(MlpParams& p, const std::vector<double>& grads, AdamState& st, double lr,
               const AdamConfig& cfg = {});

// target <- tau * online + (1 - tau) * target, elementwise.
void polyak_update(MlpParams& target, const MlpParams& online, double tau);

}  // namespace grasplite::neural
