#include "grasplite/rotation/rotation.hpp"

#include <algorithm>
#include <cmath>

#include "grasplite/errors.hpp"

namespace grasplite::rotation {
namespace {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

RotationMatrix from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  RotationMatrix r;
  for (std::size_t i = 0; i < 3; ++i) {
    r.m[i * 3 + 0] = c0[i];
    r.m[i * 3 + 1] = c1[i];
    r.m[i * 3 + 2] = c2[i];
  }
  return r;
}

}  // namespace

double RotationMatrix::orthonormality_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double g = 0.0;  // (R^T R)_{ij}
      for (std::size_t k = 0; k < 3; ++k) g += at(k, i) * at(k, j);
      err = std::max(err, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

double RotationMatrix::determinant() const {
  return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
         at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
         at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

bool RotationMatrix::is_valid(double tol) const {
  return orthonormality_error() <= tol && std::abs(determinant() - 1.0) <= tol;
}

RotationMatrix recover_rotation(const Rep6D& rep) {
  const Vec3 a1{rep.x[0], rep.x[1], rep.x[2]};
  const Vec3 a2{rep.x[3], rep.x[4], rep.x[5]};
  const double n1 = norm(a1);
  const double n2 = norm(a2);
  if (n1 <= kDegeneracyEps || n2 <= kDegeneracyEps) {
    throw DegenerateRepresentation("six-number representation has a near-zero half");
  }
  if (std::abs(dot3(a1, a2)) / (n1 * n2) >= 1.0 - kDegeneracyEps) {
    throw DegenerateRepresentation("six-number representation halves are near-parallel");
  }
  const Vec3 b1{a1[0] / n1, a1[1] / n1, a1[2] / n1};
  Vec3 b2 = a2;
  const double proj = dot3(b1, a2);
  for (std::size_t i = 0; i < 3; ++i) b2[i] -= proj * b1[i];
  const double nb2 = norm(b2);
  for (std::size_t i = 0; i < 3; ++i) b2[i] /= nb2;
  return from_columns(b1, b2, cross(b1, b2));
}

Rep6D encode_rotation(const RotationMatrix& r) {
  Rep6D rep;
  const Vec3 c0 = r.col(0);
  const Vec3 c1 = r.col(1);
  rep.x = {c0[0], c0[1], c0[2], c1[0], c1[1], c1[2]};
  return rep;
}

double angular_distance(const RotationMatrix& r1, const RotationMatrix& r2) {
  double trace = 0.0;  // trace(r1^T r2) = <r1, r2>_F
  for (std::size_t i = 0; i < 9; ++i) trace += r1.m[i] * r2.m[i];
  const double c = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

double saturation_penalty(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double xi : x) {
    const double excess = std::max(0.0, std::abs(xi) - kSaturationThreshold);
    acc += excess * excess;
  }
  return acc / static_cast<double>(x.size());
}

std::vector<double> saturation_penalty_grad(std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0);
  if (x.empty()) return g;
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double excess = std::abs(x[i]) - kSaturationThreshold;
    if (excess > 0.0) g[i] = 2.0 * excess * (x[i] > 0.0 ? 1.0 : -1.0) * inv_n;
  }
  return g;
}

RotationMatrix rotation_exp(const std::array<double, 3>& w) {
  const double theta = norm(w);
  // sin(t)/t and (1-cos(t))/t^2 with series fallbacks near zero.
  double k1, k2;
  if (theta < 1e-8) {
    k1 = 1.0 - theta * theta / 6.0;
    k2 = 0.5 - theta * theta / 24.0;
  } else {
    k1 = std::sin(theta) / theta;
    k2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  RotationMatrix r;
  const double wx = w[0], wy = w[1], wz = w[2];
  // I + k1 [w]_x + k2 [w]_x^2
  r.m = {1.0 + k2 * (-wy * wy - wz * wz), k1 * -wz + k2 * wx * wy, k1 * wy + k2 * wx * wz,
         k1 * wz + k2 * wx * wy, 1.0 + k2 * (-wx * wx - wz * wz), k1 * -wx + k2 * wy * wz,
         k1 * -wy + k2 * wx * wz, k1 * wx + k2 * wy * wz, 1.0 + k2 * (-wx * wx - wy * wy)};
  return r;
}

std::array<double, 3> rotation_log(const RotationMatrix& r) {
  const double trace = r.at(0, 0) + r.at(1, 1) + r.at(2, 2);
  const double theta = std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
  const Vec3 skew{r.at(2, 1) - r.at(1, 2), r.at(0, 2) - r.at(2, 0), r.at(1, 0) - r.at(0, 1)};
  if (theta < 1e-8) {
    return {skew[0] / 2.0, skew[1] / 2.0, skew[2] / 2.0};
  }
  if (theta > M_PI - 1e-6) {
    // Near pi the skew part vanishes; take the axis from (R + I)/2 = aa^T.
    const Vec3 diag{(r.at(0, 0) + 1.0) / 2.0, (r.at(1, 1) + 1.0) / 2.0,
                    (r.at(2, 2) + 1.0) / 2.0};
    std::size_t k = 0;
    if (diag[1] > diag[k]) k = 1;
    if (diag[2] > diag[k]) k = 2;
    Vec3 axis{};
    axis[k] = std::sqrt(std::max(diag[k], 0.0));
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != k) axis[j] = (r.at(k, j) + r.at(j, k)) / (4.0 * axis[k]);
    }
    const double n = norm(axis);
    // Keep the axis on the same side as the (tiny) skew part when possible.
    double sign = 1.0;
    if (dot3(axis, skew) < 0.0) sign = -1.0;
    return {sign * theta * axis[0] / n, sign * theta * axis[1] / n,
            sign * theta * axis[2] / n};
  }
  const double scale = theta / (2.0 * std::sin(theta));
  return {scale * skew[0], scale * skew[1], scale * skew[2]};
}

RotationMatrix compose(const RotationMatrix& a, const RotationMatrix& b) {
  RotationMatrix r;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  }
  return r;
}

RotationMatrix transpose(const RotationMatrix& r) {
  RotationMatrix t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t.at(i, j) = r.at(j, i);
  return t;
}

std::array<double, 3> apply(const RotationMatrix& r, const std::array<double, 3>& v) {
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = r.at(i, 0) * v[0] + r.at(i, 1) * v[1] + r.at(i, 2) * v[2];
  }
  return out;
}

RotationMatrix rotation_about_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  RotationMatrix r;
  r.m = {1, 0, 0, 0, c, -s, 0, s, c};
  return r;
}

RotationMatrix rotation_about_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  RotationMatrix r;
  r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
  return r;
}

RotationMatrix rotation_about_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  RotationMatrix r;
  r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

RotationMatrix euler_zyx(double z, double y, double x) {
  return compose(rotation_about_z(z), compose(rotation_about_y(y), rotation_about_x(x)));
}

RotationMatrix rotate_towards(const RotationMatrix& from, const RotationMatrix& to,
                              double max_angle) {
  const RotationMatrix rel = compose(transpose(from), to);
  const std::array<double, 3> w = rotation_log(rel);
  const double theta = norm(w);
  if (theta <= max_angle) return to;
  const double s = max_angle / theta;
  return compose(from, rotation_exp({w[0] * s, w[1] * s, w[2] * s}));
}

RotationMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double q[4];
  double nsq = 0.0;
  do {
    nsq = 0.0;
    for (double& qi : q) {
      qi = gauss(rng);
      nsq += qi * qi;
    }
  } while (nsq < 1e-12);
  const double inv = 1.0 / std::sqrt(nsq);
  const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
  RotationMatrix r;
  r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
         2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
  return r;
}

}  // namespace grasplite::rotation
