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

#include "preseg/aggregation/keyframes.hpp"

namespace preseg::aggregation
{

std::vector<KeyframeStamp> designateKeyframes(
  std::span<const data::Pose> poses, const KeyframeThresholds & thresholds)
{
  std::vector<KeyframeStamp> stamps;
  if (poses.empty()) {
    return stamps;
  }
  stamps.push_back({0, poses[0]});
  for (std::size_t i = 1; i < poses.size(); ++i) {
    const data::Pose & last = stamps.back().pose;
    const double moved = (poses[i].translation() - last.translation()).norm();
    const double turned = data::Pose::rotationAngleBetween(last, poses[i]);
    if (moved > thresholds.translation || turned > thresholds.rotation) {
      stamps.push_back({static_cast<std::uint32_t>(i), poses[i]});
    }
  }
  return stamps;
}

}  // namespace preseg::aggregation
