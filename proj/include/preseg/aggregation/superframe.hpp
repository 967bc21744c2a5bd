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

#ifndef PRESEG__AGGREGATION__SUPERFRAME_HPP_
#define PRESEG__AGGREGATION__SUPERFRAME_HPP_

#include "preseg/data/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace preseg::aggregation
{

/// Point of an accumulated cloud. `frame`/`index` locate the source point.
struct SuperPoint
{
  Eigen::Vector3f position;
  float intensity{};
  std::uint32_t frame{};
  std::uint32_t index{};
};

/// Frames in [center - half_width, center + half_width] (clipped to the
/// sequence) expressed in the center frame's sensor coordinates.
struct Superframe
{
  std::uint32_t center{};
  std::uint32_t half_width{};
  std::uint32_t first_frame{};
  std::uint32_t last_frame{};
  std::vector<SuperPoint> points;

  std::size_t size() const { return points.size(); }
};

/// `frames[i]` must be paired with `poses[i]`. Throws Error(kRange) when
/// `center` is outside the sequence.
Superframe buildSuperframe(
  std::span<const data::PointFrame> frames, std::span<const data::Pose> poses, std::uint32_t center,
  std::uint32_t half_width);

/// Transform taking points of frame `from` into frame `to` coordinates.
data::Pose relativePose(std::span<const data::Pose> poses, std::uint32_t from, std::uint32_t to);

}  // namespace preseg::aggregation

#endif  // PRESEG__AGGREGATION__SUPERFRAME_HPP_
