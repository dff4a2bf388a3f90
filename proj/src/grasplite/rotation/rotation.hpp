#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace grasplite::rotation {

// Norm/parallelism guard below which a six-number representation is
// considered undecodable.
inline constexpr double kDegeneracyEps = 1e-7;
// Components beyond this magnitude count as saturated actor outputs.
inline constexpr double kSaturationThreshold = 0.9;

// Proper rotation, row-major 3x3. Columns are the rotated basis vectors.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double at(std::size_t r, std::size_t c) const { return m[r * 3 + c]; }
  double& at(std::size_t r, std::size_t c) { return m[r * 3 + c]; }
  std::array<double, 3> col(std::size_t c) const { return {m[c], m[3 + c], m[6 + c]}; }

  static RotationMatrix identity() { return {}; }
  // Max deviation from orthonormality / unit determinant.
  double orthonormality_error() const;
  double determinant() const;
  bool is_valid(double tol = 1e-9) const;
};

// Continuous six-number encoding: the first two matrix columns,
// x = (col0, col1). Decodable whenever the halves are non-degenerate.
struct Rep6D {
  std::array<double, 6> x{1, 0, 0, 0, 1, 0};
};

// Gram-Schmidt recovery of the full matrix: b1 from the first half, b2 as the
// normalized residual of the second half, b3 = b1 x b2.
// Throws DegenerateRepresentation on (near-)zero or (near-)parallel halves.
RotationMatrix recover_rotation(const Rep6D& rep);

// Inverse of recover_rotation on valid rotations: drops the third column.
Rep6D encode_rotation(const RotationMatrix& r);

// Geodesic distance in [0, pi]: arccos((trace(r1^T r2) - 1) / 2).
double angular_distance(const RotationMatrix& r1, const RotationMatrix& r2);

// Mean squared hinge beyond the saturation threshold; zero on the interior,
// so it never prefers one orientation over another.
double saturation_penalty(std::span<const double> x);
std::vector<double> saturation_penalty_grad(std::span<const double> x);

// Axis-angle exponential/logarithm (Rodrigues).
RotationMatrix rotation_exp(const std::array<double, 3>& w);
std::array<double, 3> rotation_log(const RotationMatrix& r);

RotationMatrix compose(const RotationMatrix& a, const RotationMatrix& b);  // a * b
RotationMatrix transpose(const RotationMatrix& r);
std::array<double, 3> apply(const RotationMatrix& r, const std::array<double, 3>& v);

RotationMatrix rotation_about_x(double angle);
RotationMatrix rotation_about_y(double angle);
RotationMatrix rotation_about_z(double angle);
// R_z(z) * R_y(y) * R_x(x)
RotationMatrix euler_zyx(double z, double y, double x);

// Rotates `from` along the geodesic toward `to`, moving at most max_angle.
RotationMatrix rotate_towards(const RotationMatrix& from, const RotationMatrix& to,
                              double max_angle);

// Uniform (Haar) random rotation, sampled via a normalized Gaussian quaternion.
RotationMatrix random_rotation(std::mt19937_64& rng);

}  // namespace grasplite::rotation
