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

#include "preseg/aggregation/superframe.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <string>

namespace preseg::aggregation
{

data::Pose relativePose(std::span<const data::Pose> poses, std::uint32_t from, std::uint32_t to)
{
  return poses[to].inverse() * poses[from];
}

Superframe buildSuperframe(
  std::span<const data::PointFrame> frames, std::span<const data::Pose> poses, std::uint32_t center,
  std::uint32_t half_width)
{
  if (frames.size() != poses.size()) {
    throw Error(ErrorCode::kParameter, "frame count differs from pose count");
  }
  if (center >= frames.size()) {
    throw Error(
      ErrorCode::kRange, "superframe center " + std::to_string(center) + " outside sequence of " +
                           std::to_string(frames.size()));
  }
  Superframe sf;
  sf.center = center;
  sf.half_width = half_width;
  sf.first_frame = center >= half_width ? center - half_width : 0;
  sf.last_frame = static_cast<std::uint32_t>(
    std::min<std::size_t>(static_cast<std::size_t>(center) + half_width, frames.size() - 1));

  std::size_t total = 0;
  for (std::uint32_t f = sf.first_frame; f <= sf.last_frame; ++f) {
    total += frames[f].points.size();
  }
  sf.points.reserve(total);
  for (std::uint32_t f = sf.first_frame; f <= sf.last_frame; ++f) {
    const Eigen::Matrix4d rel = relativePose(poses, f, center).matrix();
    const Eigen::Matrix3d r = rel.topLeftCorner<3, 3>();
    const Eigen::Vector3d t = rel.topRightCorner<3, 1>();
    const auto & pts = frames[f].points;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
      const Eigen::Vector3d p = r * pts[i].position() + t;
      sf.points.push_back({p.cast<float>(), pts[i].intensity, f, i});
    }
  }
  return sf;
}

}  // namespace preseg::aggregation
