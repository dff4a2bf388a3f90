#pragma once

#include <cstddef>

// Internal dispatch table shared by the lane implementations.
namespace grasplite::kernels::detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, const double*, double*);
  void (*matvec_t_acc)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*rank1_acc)(const double*, std::size_t, const double*, std::size_t, double*);
  void (*adam_update)(double*, double*, double*, const double*, std::size_t, double, double,
                      double, double, double, double);
  void (*polyak_mix)(double*, const double*, std::size_t, double);
  void (*accum_stats)(const double*, std::size_t, double*, double*);
};

#if defined(GRASPLITE_BUILD_AVX2)
const KernelTable& avx2_table();
bool avx2_available();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace grasplite::kernels::detail
