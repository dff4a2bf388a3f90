#include "grasplite/normalizer/normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "grasplite/errors.hpp"
#include "grasplite/kernels/kernels.hpp"

namespace grasplite::normalizer {

RunningStats::RunningStats(std::size_t dim, std::vector<bool> mask)
    : sum_(dim, 0.0), sum_sq_(dim, 0.0), mask_(std::move(mask)) {
  if (mask_.size() != dim) throw DimensionMismatch("normalizer mask size != dim");
}

RunningStats::RunningStats(std::size_t dim)
    : RunningStats(dim, std::vector<bool>(dim, true)) {}

void RunningStats::update(std::span<const double> sample) {
  if (sample.size() != dim()) throw DimensionMismatch("normalizer update size != dim");
  kernels::accum_stats(sample.data(), dim(), sum_.data(), sum_sq_.data());
  count_ += 1;
}

void RunningStats::update_batch(const double* rows, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    kernels::accum_stats(rows + i * dim(), dim(), sum_.data(), sum_sq_.data());
  }
  count_ += n;
}

double RunningStats::mean(std::size_t i) const {
  if (count_ == 0) throw Uninitialized("normalizer has no samples");
  return sum_[i] / static_cast<double>(count_);
}

double RunningStats::stddev(std::size_t i) const {
  if (count_ == 0) throw Uninitialized("normalizer has no samples");
  const double n = static_cast<double>(count_);
  const double mu = sum_[i] / n;
  const double var = std::max(0.0, sum_sq_[i] / n - mu * mu);
  return std::max(std::sqrt(var), kSigmaMin);
}

void RunningStats::normalize_into(std::span<const double> v, double* out) const {
  if (v.size() != dim()) throw DimensionMismatch("normalize input size != dim");
  if (count_ == 0) throw Uninitialized("normalizer has no samples");
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!mask_[i]) {
      out[i] = v[i];
      continue;
    }
    const double mu = sum_[i] / n;
    const double var = std::max(0.0, sum_sq_[i] / n - mu * mu);
    const double sd = std::max(std::sqrt(var), kSigmaMin);
    out[i] = std::clamp((v[i] - mu) / sd, -kClip, kClip);
  }
}

std::vector<double> RunningStats::normalize(std::span<const double> v) const {
  std::vector<double> out(v.size());
  normalize_into(v, out.data());
  return out;
}

void RunningStats::merge_with(const RunningStats& other) {
  if (other.dim() != dim() || other.mask_ != mask_) {
    throw MaskMismatch("normalizer merge across different dims or masks");
  }
  count_ += other.count_;
  for (std::size_t i = 0; i < dim(); ++i) {
    sum_[i] += other.sum_[i];
    sum_sq_[i] += other.sum_sq_[i];
  }
}

void RunningStats::reset() {
  count_ = 0;
  std::fill(sum_.begin(), sum_.end(), 0.0);
  std::fill(sum_sq_.begin(), sum_sq_.end(), 0.0);
}

RunningStats RunningStats::from_raw(std::vector<bool> mask, std::uint64_t count,
                                    std::vector<double> sum, std::vector<double> sum_sq) {
  if (sum.size() != mask.size() || sum_sq.size() != mask.size()) {
    throw DimensionMismatch("normalizer raw fields have inconsistent sizes");
  }
  RunningStats st(sum.size(), std::move(mask));
  st.count_ = count;
  st.sum_ = std::move(sum);
  st.sum_sq_ = std::move(sum_sq);
  return st;
}

RunningStats merge(const RunningStats& a, const RunningStats& b) {
  RunningStats out = a;
  out.merge_with(b);
  return out;
}

}  // namespace grasplite::normalizer
