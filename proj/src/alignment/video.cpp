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

#include "preseg/alignment/video.hpp"

#include "preseg/alignment/rig_optimizer.hpp"
#include "preseg/common/parallel.hpp"

#include <cstdio>

namespace preseg::alignment
{

std::vector<PseudoImage> renderCamera(
  const PseudoCameraRig & rig, int camera, std::span<const aggregation::VoxelGrid> superframes,
  const PseudoColorParams & color)
{
  color.validate();
  const Camera cam = rig.camera(camera);
  std::vector<PseudoImage> out(superframes.size());
  parallelFor(superframes.size(), [&](std::size_t f) {
    out[f] = renderPseudoImage(superframes[f], voxelHues(superframes[f]), cam, color);
  });
  return out;
}

PseudoVideo renderSequence(
  const PseudoCameraRig & rig, std::span<const aggregation::VoxelGrid> superframes, const PseudoColorParams & color)
{
  PseudoVideo video;
  for (int k = 0; k < rig.cameraCount(); ++k) {
    video.frames.push_back(renderCamera(rig, k, superframes, color));
  }
  return video;
}

void exportVideoPng(const PseudoVideo & video, const std::filesystem::path & dir)
{
  for (std::size_t k = 0; k < video.frames.size(); ++k) {
    const auto cam_dir = dir / ("cam" + std::to_string(k));
    std::filesystem::create_directories(cam_dir);
    for (std::size_t f = 0; f < video.frames[k].size(); ++f) {
      char name[32];
      std::snprintf(name, sizeof(name), "%06zu.png", f);
      writePng(video.frames[k][f].rgb, cam_dir / name);
    }
  }
}

}  // namespace preseg::alignment
