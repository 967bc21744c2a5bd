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

#ifndef PRESEG__ALIGNMENT__RENDERER_HPP_
#define PRESEG__ALIGNMENT__RENDERER_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/image.hpp"

#include <atomic>
#include <cstdint>
#include <limits>
#include <vector>

namespace preseg::alignment
{

/// Front-most voxel per pixel, with its depth along the optical axis.
struct PixelVoxelMap
{
  static constexpr std::int32_t kEmpty = -1;

  int width{};
  int height{};
  std::vector<std::int32_t> voxel;
  std::vector<float> depth;

  PixelVoxelMap() = default;
  PixelVoxelMap(int w, int h)
  : width(w), height(h), voxel(static_cast<std::size_t>(w) * h, kEmpty),
    depth(static_cast<std::size_t>(w) * h, std::numeric_limits<float>::infinity())
  {
  }

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool mapped(std::size_t i) const { return voxel[i] != kEmpty; }
  std::size_t mappedCount() const;
};

struct PseudoImage
{
  PixelVoxelMap map;
  RgbImage rgb;  // black until colored
};

/// Counts corner projections so callers can assert the 8-per-voxel budget.
struct ProjectionCounter
{
  std::atomic<std::uint64_t> corners{0};
};

/// Convex-hull voxel splatting. Each voxel's 8 corners are projected, their 2D
/// hull is filled (every pixel the hull overlaps with positive area), and the
/// z-buffer keeps the voxel with the smallest center depth. Voxels with any
/// corner at or behind the camera plane are skipped, which also covers a
/// camera sitting inside a voxel.
PseudoImage projectVoxels(
  const aggregation::VoxelGrid & grid, const Camera & camera, ProjectionCounter * counter = nullptr);

/// Pixels covered by one voxel's projected hull, ignoring occlusion.
std::vector<std::size_t> voxelFootprint(
  const aggregation::VoxelGrid & grid, aggregation::VoxelId id, const Camera & camera,
  ProjectionCounter * counter = nullptr);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__RENDERER_HPP_
