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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "chairbot/error.hpp"
#include "test_support.hpp"

namespace chairbot {
namespace {

using testing::random_unit_quat;
using testing::random_vec;

const double kHalf = std::sqrt(0.5);

// Rotation by the sandwich product q (0, v) q*, written out independently.
Vec3 sandwich(const Quat& q, const Vec3& v) {
  auto mul = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    // (x, y, z, w) Hamilton product
    return std::array<double, 4>{
        a[3] * b[0] + a[0] * b[3] + a[1] * b[2] - a[2] * b[1],
        a[3] * b[1] - a[0] * b[2] + a[1] * b[3] + a[2] * b[0],
        a[3] * b[2] + a[0] * b[1] - a[1] * b[0] + a[2] * b[3],
        a[3] * b[3] - a[0] * b[0] - a[1] * b[1] - a[2] * b[2]};
  };
  const auto r = mul(mul({q.x, q.y, q.z, q.w}, {v.x, v.y, v.z, 0.0}), {-q.x, -q.y, -q.z, q.w});
  return {r[0], r[1], r[2]};
}

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

TEST(QuatRotate, IdentityLeavesVectorAlone) {
  expect_vec_near(quat_rotate(Quat{}, kUnitZ), {0, 0, 1}, 0.0);
}

TEST(QuatRotate, QuarterTurnAboutX) {
  expect_vec_near(quat_rotate({kHalf, 0, 0, kHalf}, kUnitZ), {0, -1, 0}, 1e-12);
}

TEST(QuatRotate, HalfTurnAboutX) {
  expect_vec_near(quat_rotate({1, 0, 0, 0}, kUnitZ), {0, 0, -1}, 1e-12);
}

TEST(QuatRotate, NonFiniteInputThrows) {
  EXPECT_THROW(quat_rotate({std::nan(""), 0, 0, 1}, kUnitZ), Error);
  EXPECT_THROW(quat_rotate(Quat{}, {std::numeric_limits<double>::infinity(), 0, 0}), Error);
}

TEST(QuatRotate, MatchesSandwichProductAndPreservesNorm) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Quat q = random_unit_quat(rng);
    const Vec3 v = random_vec(rng, 3.0);
    const Vec3 r = quat_rotate(q, v);
    expect_vec_near(r, sandwich(q, v), 1e-12);
    ASSERT_NEAR(r.norm(), v.norm(), 1e-9);
  }
}

TEST(QuatRotate, AgreesWithRotationMatrix) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Quat q = random_unit_quat(rng);
    const Vec3 v = random_vec(rng, 1.0);
    expect_vec_near(to_rotation_matrix(q) * v, quat_rotate(q, v), 1e-12);
  }
}

TEST(RotationMatrix, IsOrthonormalWithUnitDeterminant) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = to_rotation_matrix(random_unit_quat(rng));
    const Mat3 rrt = r * r.transposed();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) ASSERT_NEAR(rrt(a, b), a == b ? 1.0 : 0.0, 1e-12);
    }
    ASSERT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(UPrj, PinnedValues) {
  EXPECT_DOUBLE_EQ(u_prj(Quat{}), 1.0);
  EXPECT_NEAR(u_prj({kHalf, 0, 0, kHalf}), 0.0, 1e-12);
  EXPECT_NEAR(u_prj({1, 0, 0, 0}), -1.0, 1e-12);
}

TEST(UPrj, EqualsRotatedNormalZExactly) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Quat q = random_unit_quat(rng);
    ASSERT_EQ(u_prj(q), quat_rotate(q, kUnitZ).z);
  }
}

TEST(QuatDist, PinnedValues) {
  EXPECT_DOUBLE_EQ(quat_dist_from_identity(Quat{}), 0.0);
  EXPECT_DOUBLE_EQ(quat_dist_from_identity({0.5, 0.5, 0.5, 0.5}), 1.0);
  EXPECT_NEAR(quat_dist_from_identity({kHalf, 0, 0, kHalf}),
              std::sqrt(kHalf * kHalf + (kHalf - 1) * (kHalf - 1)), 1e-12);
  EXPECT_NEAR(quat_dist_from_identity({kHalf, 0, 0, kHalf}), 0.7654, 1e-4);
}

TEST(QuatDist, UsesRawComponentsWithoutSignCanonicalization) {
  // q and -q are the same rotation but lie on opposite sides of (0, 0, 0, 1).
  EXPECT_DOUBLE_EQ(quat_dist_from_identity({0, 0, 0, -1}), 2.0);
  const Quat q{0.1, 0.2, 0.3, std::sqrt(1 - 0.14)};
  const Quat neg{-q.x, -q.y, -q.z, -q.w};
  EXPECT_GT(quat_dist_from_identity(neg), 1.9);
  EXPECT_LT(quat_dist_from_identity(q), 0.5);
}

TEST(Euler, PinnedDecompositions) {
  const Rpy id = quat_to_rpy(Quat{});
  EXPECT_NEAR(id.roll, 0, 1e-12);
  EXPECT_NEAR(id.pitch, 0, 1e-12);
  EXPECT_NEAR(id.yaw, 0, 1e-12);

  const double h = 35.0 * kDegToRad / 2;
  const Rpy yaw = quat_to_rpy({0, 0, std::sin(h), std::cos(h)});
  EXPECT_NEAR(yaw.roll, 0, 1e-9);
  EXPECT_NEAR(yaw.pitch, 0, 1e-9);
  EXPECT_NEAR(yaw.yaw, 35, 1e-9);

  const Rpy roll = quat_to_rpy({kHalf, 0, 0, kHalf});
  EXPECT_NEAR(roll.roll, 90, 1e-9);
  EXPECT_NEAR(roll.pitch, 0, 1e-9);
  EXPECT_NEAR(roll.yaw, 0, 1e-9);
}

TEST(Euler, RoundTripAwayFromGimbalLock) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> angle(-179.0, 179.0);
  std::uniform_real_distribution<double> pitch(-85.0, 85.0);
  for (int i = 0; i < 10000; ++i) {
    const Rpy in{angle(rng), pitch(rng), angle(rng)};
    const Rpy out = quat_to_rpy(rpy_to_quat(in));
    ASSERT_NEAR(out.roll, in.roll, 1e-6);
    ASSERT_NEAR(out.pitch, in.pitch, 1e-6);
    ASSERT_NEAR(out.yaw, in.yaw, 1e-6);
  }
}

TEST(Euler, ComposesAsZyx) {
  // R = Rz(yaw) Ry(pitch) Rx(roll) built from axis rotations.
  const Rpy in{20, -30, 40};
  const Quat built = axis_angle(kUnitZ, in.yaw * kDegToRad) * axis_angle(kUnitY, in.pitch * kDegToRad) *
                     axis_angle(kUnitX, in.roll * kDegToRad);
  const Quat q = rpy_to_quat(in);
  const double s = (built.w * q.w > 0) ? 1.0 : -1.0;
  EXPECT_NEAR(q.x, s * built.x, 1e-12);
  EXPECT_NEAR(q.y, s * built.y, 1e-12);
  EXPECT_NEAR(q.z, s * built.z, 1e-12);
  EXPECT_NEAR(q.w, s * built.w, 1e-12);
}

TEST(Euler, GimbalLockReportsZeroRoll) {
  const Rpy out = quat_to_rpy(rpy_to_quat({30, 90, 10}));
  EXPECT_DOUBLE_EQ(out.roll, 0.0);
  EXPECT_NEAR(out.pitch, 90, 1e-6);
  // Same rotation as the input.
  const Quat a = rpy_to_quat({30, 90, 10});
  const Quat b = rpy_to_quat(out);
  expect_vec_near(quat_rotate(a, {0.3, -0.2, 0.7}), quat_rotate(b, {0.3, -0.2, 0.7}), 1e-9);
}

TEST(Quat, NormalizeGivesUnitNorm) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> n(0, 5);
  for (int i = 0; i < 1000; ++i) {
    const Quat q{n(rng), n(rng), n(rng), n(rng)};
    ASSERT_NEAR(q.normalized().norm(), 1.0, 1e-12);
  }
  EXPECT_THROW((Quat{0, 0, 0, 0}.normalized()), Error);
}

TEST(Quat, IntegrateAttitudeMatchesAxisAngle) {
  const Vec3 omega{0, 0, 2.0};
  const Quat q = integrate_attitude(Quat{}, omega, 0.25);
  const Rpy rpy = quat_to_rpy(q);
  EXPECT_NEAR(rpy.yaw, 0.5 * kRadToDeg, 1e-9);
  EXPECT_NEAR(q.norm(), 1.0, 1e-12);
}

TEST(Mat3, InverseAndSingularity) {
  const Mat3 a{{2, 1, 0, 0, 3, 1, 1, 0, 4}};
  const Mat3 p = a * a.inverse();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(p(r, c), r == c ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_THROW(Mat3{}.inverse(), ValidationError);
}

TEST(Mat3, PointInertiaOfOffsetMass) {
  const Mat3 i = point_inertia(2.0, {0, 0, 3});
  EXPECT_DOUBLE_EQ(i(0, 0), 18.0);
  EXPECT_DOUBLE_EQ(i(1, 1), 18.0);
  EXPECT_DOUBLE_EQ(i(2, 2), 0.0);
}

}  // namespace
}  // namespace chairbot
