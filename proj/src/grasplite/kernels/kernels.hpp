#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Dense double-precision kernels behind the hot training loops. Every entry
// point has a scalar reference implementation plus SIMD variants (AVX2 on
// x86-64, NEON on aarch64) selected once at startup from CPU capabilities.
// The GRASPLITE_KERNELS environment variable (scalar|avx2|neon) overrides the
// automatic choice; set_lane() switches explicitly, e.g. for equivalence
// tests. Lanes may differ in the last few ulps (fma, reassociation), so a run
// is reproducible per lane, not across lanes.
namespace grasplite::kernels {

enum class Lane { scalar, avx2, neon };

const char* lane_name(Lane lane);
Lane active_lane();
std::vector<Lane> supported_lanes();
// Returns false (and leaves the dispatch untouched) if the lane is not
// supported on this CPU. Not thread safe; switch lanes only while no
// kernel calls are in flight.
bool set_lane(Lane lane);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);
// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x[i] *= alpha
void scale(double* x, std::size_t n, double alpha);
// y = W x + bias; W is rows x cols row-major, bias may be nullptr.
void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x,
            const double* bias, double* y);
// out[j] += sum_r W[r][j] * g[r]  (accumulating transposed matvec)
void matvec_t_acc(const double* w, std::size_t rows, std::size_t cols, const double* g,
                  double* out);
// W_acc[r][j] += g[r] * x[j]  (accumulating rank-1 update)
void rank1_acc(const double* g, std::size_t rows, const double* x, std::size_t cols,
               double* w_acc);
// In-place Adam update for one flat parameter block. bc1/bc2 are the
// precomputed bias corrections (1 - beta^t).
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double beta1, double beta2, double eps, double bc1, double bc2);
// target[i] = tau * online[i] + (1 - tau) * target[i]
void polyak_mix(double* target, const double* online, std::size_t n, double tau);
// sum[i] += x[i]; sumsq[i] += x[i]^2
void accum_stats(const double* x, std::size_t n, double* sum, double* sumsq);

}  // namespace grasplite::kernels
