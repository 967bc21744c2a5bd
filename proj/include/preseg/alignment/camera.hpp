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

#ifndef PRESEG__ALIGNMENT__CAMERA_HPP_
#define PRESEG__ALIGNMENT__CAMERA_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <optional>
#include <vector>

namespace preseg::alignment
{

struct Intrinsics
{
  double fx{540.0};
  double fy{540.0};
  double cx{540.0};
  double cy{360.0};
  int width{1080};
  int height{720};

  static Intrinsics forResolution(int width, int height, double focal);
  bool valid() const { return fx > 0 && fy > 0 && width > 0 && height > 0; }
};

/// Pinhole camera. Camera axes: x right, y down, z along the optical axis.
struct Camera
{
  Intrinsics intrinsics;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // columns: camera axes in the scene frame
  Eigen::Vector3d position = Eigen::Vector3d::Zero();

  /// `up_hint` must not be parallel to `forward`.
  static Camera lookAlong(
    const Intrinsics & intrinsics, const Eigen::Vector3d & position, const Eigen::Vector3d & forward,
    const Eigen::Vector3d & up_hint = Eigen::Vector3d::UnitZ());

  Eigen::Vector3d toCamera(const Eigen::Vector3d & p) const { return rotation.transpose() * (p - position); }
  Eigen::Vector3d forward() const { return rotation.col(2); }
  /// Pixel coordinates (continuous, pixel (i,j) spans [i,i+1)x[j,j+1)) and depth.
  /// Empty for points at or behind the camera plane.
  std::optional<Eigen::Vector3d> project(const Eigen::Vector3d & p) const;
};

/// Surround rig sharing one convergence point at height `t` above the scene
/// origin. Camera k looks along yaw `yaw_offsets[k]` pitched by `alpha`, and
/// sits `orbit_radius` behind the convergence point on its own optical axis.
/// The relative transforms between cameras are fixed yaw rotations about the
/// vertical through the convergence point; (t, alpha) move the whole rig.
struct PseudoCameraRig
{
  Intrinsics intrinsics;
  std::vector<double> yaw_offsets{0.0, 1.5707963267948966, 3.141592653589793, 4.71238898038469};
  int primary{0};
  double t{0.0};                        // m
  double alpha{-0.17453292519943295};   // rad
  double alpha_min{-0.5235987755982988};  // rad (-30 deg)
  double alpha_max{0.17453292519943295};  // rad (+10 deg)
  double orbit_radius{0.0};             // m

  int cameraCount() const { return static_cast<int>(yaw_offsets.size()); }
  Eigen::Vector3d convergencePoint() const { return {0.0, 0.0, t}; }
  Camera camera(int k) const;
  Camera primaryCamera() const { return camera(primary); }
  /// Same rig with a different height or pitch.
  PseudoCameraRig with(double new_t, double new_alpha) const;
};

/// Index of the camera whose level optical axis best follows `motion`
/// (scene frame). Keeps `rig.primary` when the motion has no horizontal part.
int selectPrimaryCamera(const PseudoCameraRig & rig, const Eigen::Vector3d & motion);

/// Single camera looking straight down from `height`, image-up along +x.
Camera birdsEyeCamera(const Intrinsics & intrinsics, double height);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__CAMERA_HPP_
