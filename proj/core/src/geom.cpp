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

#include "chairbot/geom.hpp"

#include "chairbot/error.hpp"

namespace chairbot {

Quat Quat::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error("cannot normalize a zero or non-finite quaternion");
  }
  return {x / n, y / n, z / n, w / n};
}

Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
          a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z};
}

Mat3 Mat3::transposed() const {
  Mat3 t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
  }
  return t;
}

double Mat3::determinant() const {
  const Mat3& a = *this;
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 Mat3::inverse() const {
  const Mat3& a = *this;
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) throw ValidationError("singular 3x3 matrix");
  const double inv = 1.0 / det;
  Mat3 r;
  r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * inv;
  r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * inv;
  r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * inv;
  r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * inv;
  r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * inv;
  r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * inv;
  r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * inv;
  r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * inv;
  r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * inv;
  return r;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
  return *this;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    }
  }
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
          a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Mat3 operator*(double s, const Mat3& a) {
  Mat3 r = a;
  for (double& e : r.m) e *= s;
  return r;
}

Mat3 point_inertia(double mass, const Vec3& r) {
  const double rr = r.squared_norm();
  return Mat3{{mass * (rr - r.x * r.x), -mass * r.x * r.y, -mass * r.x * r.z,
               -mass * r.y * r.x, mass * (rr - r.y * r.y), -mass * r.y * r.z,
               -mass * r.z * r.x, -mass * r.z * r.y, mass * (rr - r.z * r.z)}};
}

Quat axis_angle(const Vec3& axis, double angle) {
  const double s = std::sin(0.5 * angle);
  return {axis.x * s, axis.y * s, axis.z * s, std::cos(0.5 * angle)};
}

RotMatrix axis_angle_matrix(const Vec3& axis, double angle) {
  // Rodrigues: R = c I + s [k]x + (1 - c) k k^T
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  return Mat3{{c + t * x * x, t * x * y - s * z, t * x * z + s * y,
               t * x * y + s * z, c + t * y * y, t * y * z - s * x,
               t * x * z - s * y, t * y * z + s * x, c + t * z * z}};
}

RotMatrix to_rotation_matrix(const Quat& q) {
  const double x = q.x, y = q.y, z = q.z, w = q.w;
  return Mat3{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
               2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
               2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

Vec3 quat_rotate(const Quat& q, const Vec3& v) {
  if (!q.finite() || !v.finite()) throw Error("quat_rotate: non-finite input");
  // v' = v + 2 w (u x v) + 2 u x (u x v), u = (x, y, z)
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t = 2.0 * cross(u, v);
  return v + q.w * t + cross(u, t);
}

double u_prj(const Quat& q) { return quat_rotate(q, kUnitZ).z; }

double quat_dist_from_identity(const Quat& q) {
  const double dw = q.w - 1.0;
  return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z + dw * dw);
}

Rpy quat_to_rpy(const Quat& q) {
  const RotMatrix r = to_rotation_matrix(q);
  const double cos_pitch = std::hypot(r(0, 0), r(1, 0));
  // sin(1e-6 deg): below this the pitch is treated as exactly +-90.
  constexpr double kGimbalCos = 1.7453292519943295e-8;
  Rpy out;
  if (cos_pitch < kGimbalCos) {
    out.roll = 0.0;
    out.pitch = (r(2, 0) < 0.0 ? 90.0 : -90.0);
    out.yaw = std::atan2(-r(0, 1), r(1, 1)) * kRadToDeg;
    return out;
  }
  out.roll = std::atan2(r(2, 1), r(2, 2)) * kRadToDeg;
  out.pitch = std::atan2(-r(2, 0), cos_pitch) * kRadToDeg;
  out.yaw = std::atan2(r(1, 0), r(0, 0)) * kRadToDeg;
  return out;
}

Quat rpy_to_quat(const Rpy& rpy) {
  const Quat qz = axis_angle(kUnitZ, rpy.yaw * kDegToRad);
  const Quat qy = axis_angle(kUnitY, rpy.pitch * kDegToRad);
  const Quat qx = axis_angle(kUnitX, rpy.roll * kDegToRad);
  return (qz * qy * qx).normalized();
}

Quat integrate_attitude(const Quat& q, const Vec3& omega_world, double dt) {
  const double rate = omega_world.norm();
  if (rate * dt < 1e-300) return q;
  const Quat dq = axis_angle(omega_world / rate, rate * dt);
  return (dq * q).normalized();
}

}  // namespace chairbot
