// Copyright 2026 The chairbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace chairbot {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr double squared_norm() const { return x * x + y * y + z * z; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr Vec3 kUnitX{1.0, 0.0, 0.0};
inline constexpr Vec3 kUnitY{0.0, 1.0, 0.0};
inline constexpr Vec3 kUnitZ{0.0, 0.0, 1.0};

/// Attitude quaternion stored as (x, y, z, w); identity is (0, 0, 0, 1).
///
/// Products follow the Hamilton convention, and a quaternion maps body-frame
/// vectors into the world frame.
struct Quat {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 1.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(w);
  }
  Quat normalized() const;
  constexpr Quat conjugate() const { return {-x, -y, -z, w}; }

  friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

Quat operator*(const Quat& a, const Quat& b);

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
  static constexpr Mat3 diagonal(double a, double b, double c) {
    return Mat3{{a, 0, 0, 0, b, 0, 0, 0, c}};
  }

  constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  constexpr double operator()(int r, int c) const {
    return m[static_cast<std::size_t>(3 * r + c)];
  }

  Mat3 transposed() const;
  double determinant() const;
  // Throws ValidationError when the matrix is singular.
  Mat3 inverse() const;

  Mat3& operator+=(const Mat3& o);
};

using RotMatrix = Mat3;

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
Mat3 operator*(double s, const Mat3& a);

// Inertia contribution of a point mass at offset r: m (|r|^2 I - r r^T).
Mat3 point_inertia(double mass, const Vec3& r);

/// Rotation of a unit axis by an angle in radians.
Quat axis_angle(const Vec3& axis, double angle);
RotMatrix axis_angle_matrix(const Vec3& axis, double angle);

RotMatrix to_rotation_matrix(const Quat& q);

/// R_q v. Throws Error on non-finite input.
Vec3 quat_rotate(const Quat& q, const Vec3& v);

/// z component of the rotated seat normal, R_q e_z. Signed, in [-1, 1].
double u_prj(const Quat& q);

/// Euclidean distance between the raw components of q and (0, 0, 0, 1).
///
/// No sign canonicalization: q and -q generally give different values.
double quat_dist_from_identity(const Quat& q);

/// Roll, pitch and yaw in degrees, intrinsic Z-Y-X order (R = Rz(yaw) Ry(pitch) Rx(roll)).
struct Rpy {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

/// Inverse of rpy_to_quat away from |pitch| = 90 deg. When the pitch lies
/// within 1e-6 deg of +-90, roll is reported as 0 and the combined rotation
/// about the vertical is folded into yaw.
Rpy quat_to_rpy(const Quat& q);
Quat rpy_to_quat(const Rpy& rpy);

/// Advances an attitude by a world-frame angular velocity over dt seconds
/// using the exact exponential map, then renormalizes.
Quat integrate_attitude(const Quat& q, const Vec3& omega_world, double dt);

}  // namespace chairbot
