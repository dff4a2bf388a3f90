#include "grasplite/neural/optim.hpp"

#include <cmath>

#include "grasplite/errors.hpp"
#include "grasplite/kernels/kernels.hpp"

namespace grasplite::neural {

void adam_step(MlpParams& p, const std::vector<double>& grads, AdamState& st, double lr,
               const AdamConfig& cfg) {
  if (grads.size() != p.data.size() || st.m.size() != p.data.size()) {
    throw DimensionMismatch("adam buffers do not match the parameter vector");
  }
  st.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
  kernels::adam_update(p.data.data(), st.m.data(), st.v.data(), grads.data(), p.data.size(),
                       lr, cfg.beta1, cfg.beta2, cfg.eps, bc1, bc2);
}

void polyak_update(MlpParams& target, const MlpParams& online, double tau) {
  if (target.spec != online.spec) {
    throw DimensionMismatch("polyak update across mismatched network shapes");
  }
  if (tau < 0.0 || tau > 1.0) {
    throw OutOfRange("polyak tau must lie in [0, 1]");
  }
  kernels::polyak_mix(target.data.data(), online.data.data(), target.data.size(), tau);
}

}  // namespace grasplite::neural
