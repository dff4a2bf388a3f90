// NEON lane for aarch64 (2-wide doubles). Mirrors the AVX2 lane.
#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "grasplite/kernels/kernels_table.hpp"

namespace grasplite::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(double* x, std::size_t n, double alpha) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
  for (; i < n; ++i) x[i] *= alpha;
}

void matvec_neon(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = (bias ? bias[r] : 0.0) + dot_neon(w + r * cols, x, cols);
  }
}

void matvec_t_acc_neon(const double* w, std::size_t rows, std::size_t cols, const double* g,
                       double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (g[r] == 0.0) continue;
    axpy_neon(g[r], w + r * cols, out, cols);
  }
}

void rank1_acc_neon(const double* g, std::size_t rows, const double* x, std::size_t cols,
                    double* w_acc) {
  for (std::size_t r = 0; r < rows; ++r) axpy_neon(g[r], x, w_acc + r * cols, cols);
}

void adam_update_neon(double* p, double* m, double* v, const double* g, std::size_t n,
                      double lr, double beta1, double beta2, double eps, double bc1,
                      double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

void polyak_mix_neon(double* target, const double* online, std::size_t n, double tau) {
  const float64x2_t vt = vdupq_n_f64(tau);
  const float64x2_t vtc = vdupq_n_f64(1.0 - tau);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t mixed =
        vfmaq_f64(vmulq_f64(vtc, vld1q_f64(target + i)), vt, vld1q_f64(online + i));
    vst1q_f64(target + i, mixed);
  }
  for (; i < n; ++i) target[i] = tau * online[i] + (1.0 - tau) * target[i];
}

void accum_stats_neon(const double* x, std::size_t n, double* sum, double* sumsq) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    vst1q_f64(sum + i, vaddq_f64(vld1q_f64(sum + i), vx));
    vst1q_f64(sumsq + i, vfmaq_f64(vld1q_f64(sumsq + i), vx, vx));
  }
  for (; i < n; ++i) {
    sum[i] += x[i];
    sumsq[i] += x[i] * x[i];
  }
}

const KernelTable kNeonTable = {
    dot_neon,       axpy_neon,      scale_neon,      matvec_neon, matvec_t_acc_neon,
    rank1_acc_neon, adam_update_neon, polyak_mix_neon, accum_stats_neon,
};

}  // namespace

const KernelTable& neon_table() { return kNeonTable; }

}  // namespace grasplite::kernels::detail
