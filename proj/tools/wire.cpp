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

#include "wire.hpp"

#include "chairbot/format.hpp"

namespace chairbot::cli {

std::string cmd_line(double t, const Posture& posture) {
  std::string out = "CMD " + format_fixed(t, 1);
  for (double theta : posture.deg) out += " " + format_fixed(theta, 2);
  return out;
}

std::string imu_line(double t, const Quat& q) {
  std::string out = "IMU " + format_fixed(t, 1);
  for (double v : {q.x, q.y, q.z, q.w}) out += " " + format_fixed(v, 6);
  return out;
}

}  // namespace chairbot::cli
