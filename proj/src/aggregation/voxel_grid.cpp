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

#include "preseg/aggregation/voxel_grid.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace preseg::aggregation
{

VoxelGrid::VoxelGrid(double edge, std::vector<Voxel> voxels, std::size_t superframe_size)
: edge_(edge), voxels_(std::move(voxels)), point_to_voxel_(superframe_size, -1)
{
  index_.reserve(voxels_.size());
  for (VoxelId id = 0; id < voxels_.size(); ++id) {
    index_.emplace(voxels_[id].key, id);
    for (auto m : voxels_[id].members) {
      point_to_voxel_[m] = static_cast<std::int32_t>(id);
    }
  }
}

std::optional<VoxelId> VoxelGrid::find(const VoxelKey & key) const
{
  const auto it = index_.find(key);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<VoxelId> VoxelGrid::voxelOfPoint(std::uint32_t point) const
{
  if (point >= point_to_voxel_.size() || point_to_voxel_[point] < 0) {
    return std::nullopt;
  }
  return static_cast<VoxelId>(point_to_voxel_[point]);
}

VoxelKey VoxelGrid::keyOf(const Eigen::Vector3d & p) const
{
  return {static_cast<int>(std::floor(p.x() / edge_)), static_cast<int>(std::floor(p.y() / edge_)),
          static_cast<int>(std::floor(p.z() / edge_))};
}

Eigen::Vector3d VoxelGrid::corner(VoxelId id, int c) const
{
  const VoxelKey & k = voxels_[id].key;
  return {(k.x() + (c & 1)) * edge_, (k.y() + ((c >> 1) & 1)) * edge_, (k.z() + ((c >> 2) & 1)) * edge_};
}

VoxelGrid voxelize(const Superframe & sf, std::span<const std::uint32_t> object_points, double edge)
{
  if (!(edge > 0.0)) {
    throw Error(ErrorCode::kParameter, "voxel edge must be positive");
  }
  float lo = 0.0f;
  float hi = 0.0f;
  if (!sf.points.empty()) {
    lo = hi = sf.points.front().intensity;
    for (const auto & p : sf.points) {
      lo = std::min(lo, p.intensity);
      hi = std::max(hi, p.intensity);
    }
  }
  const float range = hi - lo;

  std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> slot;
  std::vector<Voxel> voxels;
  std::vector<double> intensity_sum;
  for (auto i : object_points) {
    const auto & p = sf.points[i];
    const VoxelKey key(
      static_cast<int>(std::floor(p.position.x() / edge)), static_cast<int>(std::floor(p.position.y() / edge)),
      static_cast<int>(std::floor(p.position.z() / edge)));
    auto [it, inserted] = slot.try_emplace(key, voxels.size());
    if (inserted) {
      Voxel v;
      v.key = key;
      v.center = (key.cast<double>() + Eigen::Vector3d::Constant(0.5)) * edge;
      voxels.push_back(std::move(v));
      intensity_sum.push_back(0.0);
    }
    voxels[it->second].members.push_back(i);
    intensity_sum[it->second] += range > 0.0f ? (p.intensity - lo) / range : 0.0;
  }
  std::vector<std::size_t> order(voxels.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto & ka = voxels[a].key;
    const auto & kb = voxels[b].key;
    return std::tie(ka.x(), ka.y(), ka.z()) < std::tie(kb.x(), kb.y(), kb.z());
  });
  std::vector<Voxel> sorted;
  sorted.reserve(voxels.size());
  for (auto o : order) {
    voxels[o].mean_intensity =
      static_cast<float>(intensity_sum[o] / static_cast<double>(voxels[o].members.size()));
    sorted.push_back(std::move(voxels[o]));
  }
  return VoxelGrid(edge, std::move(sorted), sf.points.size());
}

}  // namespace preseg::aggregation
