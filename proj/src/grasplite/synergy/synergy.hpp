#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace grasplite::synergy {

// Small row-major matrix used for pose datasets and covariance exports.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }
};

// Mean joint pose plus ordered orthonormal principal components of a grasp
// dataset. Component i's spread in the data is singular_values[i]/sqrt(n).
struct SynergyBasis {
  std::vector<double> mean;                     // J
  std::vector<std::vector<double>> components;  // each J, orthonormal, ordered
  std::vector<double> singular_values;          // non-increasing, >= 0
  std::size_t n_samples = 0;

  std::size_t joint_count() const { return mean.size(); }
  std::size_t rank() const { return components.size(); }
};

// Numeric CSV with one header row of joint names. Throws ParseError on
// malformed or non-finite values (naming the offending row) and RaggedRows
// when a row's column count differs from the header.
Matrix load_pose_dataset(const std::string& path);
Matrix parse_pose_csv(const std::string& text, const std::string& origin);

// Mean-centered SVD. Component signs are fixed so the entry of largest
// magnitude is positive, making the result deterministic.
SynergyBasis fit_pca(const Matrix& data);

// Fraction of total variance captured by the first n components.
double explained_variance(const SynergyBasis& basis, std::size_t n);

// Sample covariance with the diagonal zeroed to emphasize joint couplings.
Matrix export_covariance(const Matrix& data);

// q = clamp(mean + sum_i w_i * scale_i * component_i, [lo, hi]), with
// scale_i = 3 * singular_values[i] / sqrt(n_samples) so w_i = +-1 spans about
// three standard deviations of the dataset along component i.
std::vector<double> project_synergy(std::span<const double> weights,
                                    const SynergyBasis& basis, double lo = -1.0,
                                    double hi = 1.0);

// Test/demo stand-in for a real grasp dataset: samples concentrated on a
// low-rank affine subspace plus isotropic noise.
Matrix make_synthetic_dataset(std::mt19937_64& rng, std::size_t n_samples,
                              std::size_t joints, std::size_t rank, double noise);

// Basis file round-trip (JSON).
void save_basis(const SynergyBasis& basis, const std::string& path);
SynergyBasis load_basis(const std::string& path);

// CSV writers for the analysis artifacts.
void write_covariance_csv(const Matrix& cov, const std::string& path);
void write_explained_variance_csv(const SynergyBasis& basis, const std::string& path);

}  // namespace grasplite::synergy
