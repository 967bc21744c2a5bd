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

#ifndef PRESEG__DATA__TYPES_HPP_
#define PRESEG__DATA__TYPES_HPP_

#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace preseg::data
{

struct Point
{
  float x{};
  float y{};
  float z{};
  float intensity{};

  Eigen::Vector3d position() const { return {x, y, z}; }
  bool operator==(const Point &) const = default;
};

/// One scan from one sensor. Coordinates are in the sensor frame at capture time.
struct PointFrame
{
  std::uint32_t frame_index{};
  std::uint32_t sensor_id{};
  std::vector<Point> points;
};

/// Rigid sensor-to-world transform.
class Pose
{
public:
  static constexpr double kOrthonormalTolerance = 1e-6;

  Pose();
  /// Throws Error(kInvalidPose) unless the rotation block is orthonormal with
  /// det +1 within kOrthonormalTolerance and the bottom row is (0,0,0,1).
  explicit Pose(const Eigen::Matrix4d & matrix);

  static Pose identity() { return Pose(); }
  static Pose fromRotationTranslation(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation);

  const Eigen::Matrix4d & matrix() const { return matrix_; }
  Eigen::Matrix3d rotation() const { return matrix_.topLeftCorner<3, 3>(); }
  Eigen::Vector3d translation() const { return matrix_.topRightCorner<3, 1>(); }
  Eigen::Isometry3d isometry() const;

  Pose inverse() const;
  Pose operator*(const Pose & rhs) const;
  Eigen::Vector3d apply(const Eigen::Vector3d & p) const;

  /// Rotation angle (rad) of the relative rotation between two poses.
  static double rotationAngleBetween(const Pose & a, const Pose & b);

private:
  Eigen::Matrix4d matrix_;
};

/// SemanticKITTI-style per-point label: low 16 bits semantic, high 16 bits instance.
struct Label
{
  std::uint16_t semantic{};
  std::uint16_t instance{};

  std::uint32_t packed() const { return static_cast<std::uint32_t>(instance) << 16 | semantic; }
  static Label unpack(std::uint32_t word)
  {
    return {static_cast<std::uint16_t>(word & 0xFFFFu), static_cast<std::uint16_t>(word >> 16)};
  }
  bool unlabeled() const { return semantic == 0 && instance == 0; }
  bool operator==(const Label &) const = default;
};

using FrameLabels = std::vector<Label>;

/// Per-frame labels of a whole sequence; element i pairs with frame i.
using LabelMap = std::vector<FrameLabels>;

struct SequenceManifest
{
  std::vector<std::string> frame_paths;
  std::string pose_path;
  std::uint32_t sensor_count{1};
  std::optional<std::vector<double>> timestamps;
};

}  // namespace preseg::data

#endif  // PRESEG__DATA__TYPES_HPP_
