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

#include "preseg/data/types.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace preseg::data
{

Pose::Pose() : matrix_(Eigen::Matrix4d::Identity()) {}

Pose::Pose(const Eigen::Matrix4d & matrix) : matrix_(matrix)
{
  if (!matrix_.allFinite()) {
    throw Error(ErrorCode::kInvalidPose, "non-finite pose entry");
  }
  if (matrix_(3, 0) != 0.0 || matrix_(3, 1) != 0.0 || matrix_(3, 2) != 0.0 || matrix_(3, 3) != 1.0) {
    throw Error(ErrorCode::kInvalidPose, "bottom row must be (0,0,0,1)");
  }
  const Eigen::Matrix3d r = rotation();
  const double ortho_err = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det_err = std::abs(r.determinant() - 1.0);
  if (ortho_err > kOrthonormalTolerance || det_err > kOrthonormalTolerance) {
    throw Error(ErrorCode::kInvalidPose, "rotation block is not orthonormal with det +1");
  }
}

Pose Pose::fromRotationTranslation(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation)
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return Pose(m);
}

Eigen::Isometry3d Pose::isometry() const
{
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = rotation();
  iso.translation() = translation();
  return iso;
}

Pose Pose::inverse() const
{
  const Eigen::Matrix3d rt = rotation().transpose();
  Pose out;
  out.matrix_.topLeftCorner<3, 3>() = rt;
  out.matrix_.topRightCorner<3, 1>() = -rt * translation();
  return out;
}

Pose Pose::operator*(const Pose & rhs) const
{
  Pose out;
  out.matrix_ = matrix_ * rhs.matrix_;
  out.matrix_.row(3) << 0.0, 0.0, 0.0, 1.0;
  return out;
}

Eigen::Vector3d Pose::apply(const Eigen::Vector3d & p) const
{
  return matrix_.topLeftCorner<3, 3>() * p + matrix_.topRightCorner<3, 1>();
}

double Pose::rotationAngleBetween(const Pose & a, const Pose & b)
{
  const Eigen::Matrix3d rel = a.rotation().transpose() * b.rotation();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace preseg::data
