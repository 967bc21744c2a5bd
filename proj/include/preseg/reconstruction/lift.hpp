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

#ifndef PRESEG__RECONSTRUCTION__LIFT_HPP_
#define PRESEG__RECONSTRUCTION__LIFT_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/renderer.hpp"
#include "preseg/segmenter/rle.hpp"

#include <vector>

namespace preseg::reconstruction
{

/// Sorted, duplicate-free voxel ids of one grid.
using VoxelSet = std::vector<aggregation::VoxelId>;

/// Voxels seen through the mask's pixels. Throws Error(kDimensionMismatch)
/// when the mask and the map differ in size.
VoxelSet unprojectMask(const segmenter::Bitmask & mask, const alignment::PixelVoxelMap & map);

/// Connected components of `voxels`; `connectivity` is 6, 18 or 26.
/// Components come out ordered by their smallest voxel id.
std::vector<VoxelSet> regionGrowth(
  const VoxelSet & voxels, const aggregation::VoxelGrid & grid, int connectivity = 26);

struct BleedingParams
{
  double depth_dev{1.0};  // m, from the cluster median depth
  int border{2};          // px, Chebyshev distance to the nearest pixel outside the mask
  double max_drop{0.5};   // fraction; larger removals return the cluster unchanged
};

/// Removes voxels that only show up at the mask silhouette at a depth far
/// from the rest of the cluster (background seen through the mask edge).
VoxelSet reduceBleeding(
  const VoxelSet & cluster, const segmenter::Bitmask & mask, const alignment::PixelVoxelMap & map,
  const BleedingParams & params = {});

}  // namespace preseg::reconstruction

#endif  // PRESEG__RECONSTRUCTION__LIFT_HPP_
