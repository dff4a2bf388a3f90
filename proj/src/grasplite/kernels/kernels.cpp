#include "grasplite/kernels/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "grasplite/kernels/kernels_table.hpp"

namespace grasplite::kernels {
namespace {

// ---------------------------------------------------------------------------
// Scalar reference lane
// ---------------------------------------------------------------------------

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* x, std::size_t n, double alpha) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void matvec_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                   const double* bias, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = bias ? bias[r] : 0.0;
    const double* wr = w + r * cols;
    for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * x[j];
    y[r] = acc;
  }
}

void matvec_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* g,
                         double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    const double* wr = w + r * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += gr * wr[j];
  }
}

void rank1_acc_scalar(const double* g, std::size_t rows, const double* x, std::size_t cols,
                      double* w_acc) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double gr = g[r];
    double* wr = w_acc + r * cols;
    for (std::size_t j = 0; j < cols; ++j) wr[j] += gr * x[j];
  }
}

void adam_update_scalar(double* p, double* m, double* v, const double* g, std::size_t n,
                        double lr, double beta1, double beta2, double eps, double bc1,
                        double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

void polyak_mix_scalar(double* target, const double* online, std::size_t n, double tau) {
  for (std::size_t i = 0; i < n; ++i) target[i] = tau * online[i] + (1.0 - tau) * target[i];
}

void accum_stats_scalar(const double* x, std::size_t n, double* sum, double* sumsq) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += x[i];
    sumsq[i] += x[i] * x[i];
  }
}

const detail::KernelTable kScalarTable = {
    dot_scalar,       axpy_scalar,      scale_scalar,      matvec_scalar,
    matvec_t_acc_scalar, rank1_acc_scalar, adam_update_scalar, polyak_mix_scalar,
    accum_stats_scalar,
};

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

struct Dispatch {
  const detail::KernelTable* table = &kScalarTable;
  Lane lane = Lane::scalar;
};

const detail::KernelTable* table_for(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return &kScalarTable;
    case Lane::avx2:
#if defined(GRASPLITE_BUILD_AVX2)
      if (detail::avx2_available()) return &detail::avx2_table();
#endif
      return nullptr;
    case Lane::neon:
#if defined(__aarch64__)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Lane best_lane() {
#if defined(__aarch64__)
  return Lane::neon;
#endif
#if defined(GRASPLITE_BUILD_AVX2)
  if (detail::avx2_available()) return Lane::avx2;
#endif
  return Lane::scalar;
}

Dispatch make_dispatch() {
  Lane lane = best_lane();
  if (const char* env = std::getenv("GRASPLITE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) lane = Lane::scalar;
    else if (std::strcmp(env, "avx2") == 0 && table_for(Lane::avx2)) lane = Lane::avx2;
    else if (std::strcmp(env, "neon") == 0 && table_for(Lane::neon)) lane = Lane::neon;
  }
  return Dispatch{table_for(lane), lane};
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch();
  return d;
}

}  // namespace

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::scalar: return "scalar";
    case Lane::avx2: return "avx2";
    case Lane::neon: return "neon";
  }
  return "?";
}

Lane active_lane() { return dispatch().lane; }

std::vector<Lane> supported_lanes() {
  std::vector<Lane> lanes{Lane::scalar};
  if (table_for(Lane::avx2)) lanes.push_back(Lane::avx2);
  if (table_for(Lane::neon)) lanes.push_back(Lane::neon);
  return lanes;
}

bool set_lane(Lane lane) {
  const detail::KernelTable* table = table_for(lane);
  if (!table) return false;
  dispatch().table = table;
  dispatch().lane = lane;
  return true;
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().table->dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  dispatch().table->axpy(alpha, x, y, n);
}
void scale(double* x, std::size_t n, double alpha) { dispatch().table->scale(x, n, alpha); }
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x,
            const double* bias, double* y) {
  dispatch().table->matvec(w, rows, cols, x, bias, y);
}
void matvec_t_acc(const double* w, std::size_t rows, std::size_t cols, const double* g,
                  double* out) {
  dispatch().table->matvec_t_acc(w, rows, cols, g, out);
}
void rank1_acc(const double* g, std::size_t rows, const double* x, std::size_t cols,
               double* w_acc) {
  dispatch().table->rank1_acc(g, rows, x, cols, w_acc);
}
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double beta1, double beta2, double eps, double bc1, double bc2) {
  dispatch().table->adam_update(p, m, v, g, n, lr, beta1, beta2, eps, bc1, bc2);
}
void polyak_mix(double* target, const double* online, std::size_t n, double tau) {
  dispatch().table->polyak_mix(target, online, n, tau);
}
void accum_stats(const double* x, std::size_t n, double* sum, double* sumsq) {
  dispatch().table->accum_stats(x, n, sum, sumsq);
}

}  // namespace grasplite::kernels
