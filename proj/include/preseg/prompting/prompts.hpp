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

#ifndef PRESEG__PROMPTING__PROMPTS_HPP_
#define PRESEG__PROMPTING__PROMPTS_HPP_

#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/renderer.hpp"
#include "preseg/data/types.hpp"
#include "preseg/prompting/dbscan.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace preseg::prompting
{

struct PixelPrompt
{
  int camera{};
  std::uint32_t frame{};
  int x{};
  int y{};
  bool positive{true};
  bool operator==(const PixelPrompt &) const = default;
};

/// Prompts for one candidate object found at a keyframe. 3D points are in
/// the keyframe's sensor coordinates.
struct PromptSet
{
  int object_id{};
  std::uint32_t keyframe{};
  std::vector<Eigen::Vector3d> positives;
  std::vector<Eigen::Vector3d> negatives;
  std::vector<std::size_t> positive_sources;  // input index of each positive
  std::vector<std::size_t> cluster;           // input indices of the positive's dense cluster
  std::vector<PixelPrompt> pixels;
};

struct BilevelParams
{
  DbscanParams high{0.5, 10};
  DbscanParams low{1.5, 5};
  int max_negatives{2};
};

/// One PromptSet per high-density cluster. The positive is the cluster
/// member closest to the cluster centroid. The cluster is matched to the
/// low-density cluster holding that member (else the one with the nearest
/// centroid), and negatives are picked farthest-first among that cluster's
/// points outside the dense cluster. Object ids count up from `first_id`.
std::vector<PromptSet> bilevelPrompts(
  std::span<const Eigen::Vector3d> object_points, std::uint32_t keyframe, const BilevelParams & params = {},
  int first_id = 0);

/// One camera's view of one superframe.
struct FrameView
{
  std::uint32_t frame{};
  int camera{};
  const alignment::Camera * cam{};
  const alignment::PixelVoxelMap * map{};  // optional; enables the occlusion test
};

/// Moves each 3D prompt from the keyframe into every view's superframe by the
/// relative pose and projects it. A projection is dropped when it falls
/// behind the camera or off the raster, or, when the view has a map, lands
/// on an unmapped pixel or differs from the mapped depth by more than
/// `occlusion_tolerance`. Replaces `prompts.pixels`.
void propagatePrompts(
  PromptSet & prompts, std::span<const data::Pose> poses, std::span<const FrameView> views,
  double occlusion_tolerance = 0.5);

}  // namespace preseg::prompting

#endif  // PRESEG__PROMPTING__PROMPTS_HPP_
