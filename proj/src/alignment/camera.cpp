// Copyright 2026 The preseg Authors
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

#include "preseg/alignment/camera.hpp"

#include "preseg/common/error.hpp"

#include <cmath>

namespace preseg::alignment
{

Intrinsics Intrinsics::forResolution(int width, int height, double focal)
{
  return {focal, focal, width / 2.0, height / 2.0, width, height};
}

Camera Camera::lookAlong(
  const Intrinsics & intrinsics, const Eigen::Vector3d & position, const Eigen::Vector3d & forward,
  const Eigen::Vector3d & up_hint)
{
  const Eigen::Vector3d z = forward.normalized();
  Eigen::Vector3d x = z.cross(up_hint);
  if (x.norm() < 1e-9) {
    throw Error(ErrorCode::kParameter, "camera up hint is parallel to the optical axis");
  }
  x.normalize();
  const Eigen::Vector3d y = z.cross(x);
  Camera cam;
  cam.intrinsics = intrinsics;
  cam.position = position;
  cam.rotation.col(0) = x;
  cam.rotation.col(1) = y;
  cam.rotation.col(2) = z;
  return cam;
}

std::optional<Eigen::Vector3d> Camera::project(const Eigen::Vector3d & p) const
{
  const Eigen::Vector3d c = toCamera(p);
  if (c.z() <= 1e-6) {
    return std::nullopt;
  }
  return Eigen::Vector3d(
    intrinsics.fx * c.x() / c.z() + intrinsics.cx, intrinsics.fy * c.y() / c.z() + intrinsics.cy, c.z());
}

Camera PseudoCameraRig::camera(int k) const
{
  const double yaw = yaw_offsets.at(static_cast<std::size_t>(k));
  const Eigen::Vector3d forward(std::cos(alpha) * std::cos(yaw), std::cos(alpha) * std::sin(yaw), std::sin(alpha));
  const Eigen::Vector3d position = convergencePoint() - orbit_radius * forward;
  // Level right vector keeps the horizon horizontal whatever the pitch.
  const Eigen::Vector3d level_forward(std::cos(yaw), std::sin(yaw), 0.0);
  const Eigen::Vector3d right = level_forward.cross(Eigen::Vector3d::UnitZ()).normalized();
  Camera cam;
  cam.intrinsics = intrinsics;
  cam.position = position;
  cam.rotation.col(0) = right;
  cam.rotation.col(1) = forward.cross(right).normalized();
  cam.rotation.col(2) = forward;
  return cam;
}

PseudoCameraRig PseudoCameraRig::with(double new_t, double new_alpha) const
{
  PseudoCameraRig r = *this;
  r.t = new_t;
  r.alpha = new_alpha;
  return r;
}

int selectPrimaryCamera(const PseudoCameraRig & rig, const Eigen::Vector3d & motion)
{
  const Eigen::Vector2d m(motion.x(), motion.y());
  if (m.norm() < 1e-9) {
    return rig.primary;
  }
  int best = 0;
  double best_dot = -2.0;
  for (int k = 0; k < rig.cameraCount(); ++k) {
    const double yaw = rig.yaw_offsets[static_cast<std::size_t>(k)];
    const double dot = Eigen::Vector2d(std::cos(yaw), std::sin(yaw)).dot(m.normalized());
    if (dot > best_dot + 1e-12) {
      best_dot = dot;
      best = k;
    }
  }
  return best;
}

Camera birdsEyeCamera(const Intrinsics & intrinsics, double height)
{
  return Camera::lookAlong(intrinsics, {0.0, 0.0, height}, -Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX());
}

}  // namespace preseg::alignment
