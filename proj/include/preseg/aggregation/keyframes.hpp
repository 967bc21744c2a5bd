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

#ifndef PRESEG__AGGREGATION__KEYFRAMES_HPP_
#define PRESEG__AGGREGATION__KEYFRAMES_HPP_

#include "preseg/data/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace preseg::aggregation
{

struct KeyframeStamp
{
  std::uint32_t frame_index{};
  data::Pose pose;
};

struct KeyframeThresholds
{
  double translation{2.0};          // m
  double rotation{0.17453292519943295};  // rad (10 deg)
};

/// Frame 0 is always a keyframe; later frames become keyframes when their pose
/// moved more than a threshold away from the last keyframe's pose.
std::vector<KeyframeStamp> designateKeyframes(
  std::span<const data::Pose> poses, const KeyframeThresholds & thresholds = {});

}  // namespace preseg::aggregation

#endif  // PRESEG__AGGREGATION__KEYFRAMES_HPP_
