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

#ifndef PRESEG__AGGREGATION__VOXEL_GRID_HPP_
#define PRESEG__AGGREGATION__VOXEL_GRID_HPP_

#include "preseg/aggregation/superframe.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace preseg::aggregation
{

using VoxelKey = Eigen::Vector3i;
using VoxelId = std::uint32_t;

struct VoxelKeyHash
{
  std::size_t operator()(const VoxelKey & k) const noexcept
  {
    const auto h = static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x())) * 73856093ull ^
                   static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y())) * 19349663ull ^
                   static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.z())) * 83492791ull;
    return static_cast<std::size_t>(h);
  }
};

struct Voxel
{
  VoxelKey key;
  std::vector<std::uint32_t> members;  // indices into Superframe::points
  float mean_intensity{};              // of min-max normalized intensities, in [0,1]
  Eigen::Vector3d center;              // geometric center of the cell
};

/// Voxels are stored sorted by key so ids are reproducible.
class VoxelGrid
{
public:
  VoxelGrid() = default;
  VoxelGrid(double edge, std::vector<Voxel> voxels, std::size_t superframe_size);

  double edge() const { return edge_; }
  std::size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }
  const Voxel & operator[](VoxelId id) const { return voxels_[id]; }
  const std::vector<Voxel> & voxels() const { return voxels_; }

  std::optional<VoxelId> find(const VoxelKey & key) const;
  /// Voxel owning a Superframe point, if the point was voxelized.
  std::optional<VoxelId> voxelOfPoint(std::uint32_t point) const;
  VoxelKey keyOf(const Eigen::Vector3d & p) const;

  /// Corner `c` in [0,8) of a voxel's cell; bit 0 -> x, bit 1 -> y, bit 2 -> z.
  Eigen::Vector3d corner(VoxelId id, int c) const;

private:
  double edge_{0.1};
  std::vector<Voxel> voxels_;
  std::unordered_map<VoxelKey, VoxelId, VoxelKeyHash> index_;
  std::vector<std::int32_t> point_to_voxel_;
};

/// Throws Error(kParameter) when edge <= 0.
VoxelGrid voxelize(const Superframe & superframe, std::span<const std::uint32_t> object_points, double edge);

}  // namespace preseg::aggregation

#endif  // PRESEG__AGGREGATION__VOXEL_GRID_HPP_
