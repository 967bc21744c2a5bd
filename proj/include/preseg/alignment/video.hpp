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

#ifndef PRESEG__ALIGNMENT__VIDEO_HPP_
#define PRESEG__ALIGNMENT__VIDEO_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/pseudo_color.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace preseg::alignment
{

/// frames[k][f]: camera k, superframe f.
struct PseudoVideo
{
  std::vector<std::vector<PseudoImage>> frames;
};

/// Renders one camera of the rig over every superframe, in order.
std::vector<PseudoImage> renderCamera(
  const PseudoCameraRig & rig, int camera, std::span<const aggregation::VoxelGrid> superframes,
  const PseudoColorParams & color);

PseudoVideo renderSequence(
  const PseudoCameraRig & rig, std::span<const aggregation::VoxelGrid> superframes, const PseudoColorParams & color);

/// Writes <dir>/cam<k>/<frame:06d>.png.
void exportVideoPng(const PseudoVideo & video, const std::filesystem::path & dir);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__VIDEO_HPP_
