#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace grasplite::normalizer {

// Clamp floor for the standard deviation and symmetric output clip.
inline constexpr double kSigmaMin = 1e-2;
inline constexpr double kClip = 5.0;

// Per-dimension running moments in (count, sum, sum-of-squares) form. The sum
// representation makes cross-worker merging exact and order-insensitive,
// unlike incremental mean/variance updates. Dimensions with mask=false
// (orientation entries) pass through normalize() untouched.
class RunningStats {
 public:
  RunningStats() = default;
  RunningStats(std::size_t dim, std::vector<bool> mask);
  explicit RunningStats(std::size_t dim);  // all dimensions normalized

  std::size_t dim() const { return sum_.size(); }
  std::uint64_t count() const { return count_; }
  const std::vector<bool>& mask() const { return mask_; }
  const std::vector<double>& sum() const { return sum_; }
  const std::vector<double>& sum_sq() const { return sum_sq_; }

  void update(std::span<const double> sample);
  // rows is n x dim, row-major.
  void update_batch(const double* rows, std::size_t n);

  double mean(std::size_t i) const;
  // Population standard deviation, clamped below by kSigmaMin.
  double stddev(std::size_t i) const;

  void normalize_into(std::span<const double> v, double* out) const;
  std::vector<double> normalize(std::span<const double> v) const;

  void merge_with(const RunningStats& other);
  void reset();

  // Checkpoint support: raw field access.
  static RunningStats from_raw(std::vector<bool> mask, std::uint64_t count,
                               std::vector<double> sum, std::vector<double> sum_sq);

 private:
  std::uint64_t count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<bool> mask_;
};

RunningStats merge(const RunningStats& a, const RunningStats& b);

}  // namespace grasplite::normalizer
