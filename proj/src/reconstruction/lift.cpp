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

#include "preseg/reconstruction/lift.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace preseg::reconstruction
{

namespace
{

void requireSameSize(const segmenter::Bitmask & mask, const alignment::PixelVoxelMap & map)
{
  if (mask.width != map.width || mask.height != map.height) {
    throw Error(
      ErrorCode::kDimensionMismatch, "mask " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                                       " vs map " + std::to_string(map.width) + "x" + std::to_string(map.height));
  }
}

}  // namespace

VoxelSet unprojectMask(const segmenter::Bitmask & mask, const alignment::PixelVoxelMap & map)
{
  requireSameSize(mask, map);
  VoxelSet out;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (mask.bits[i] && map.mapped(i)) {
      out.push_back(static_cast<aggregation::VoxelId>(map.voxel[i]));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VoxelSet> regionGrowth(const VoxelSet & voxels, const aggregation::VoxelGrid & grid, int connectivity)
{
  if (connectivity != 6 && connectivity != 18 && connectivity != 26) {
    throw Error(ErrorCode::kParameter, "connectivity must be 6, 18 or 26");
  }
  std::vector<aggregation::VoxelKey> offsets;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
        if (nonzero == 0 || (connectivity == 6 && nonzero > 1) || (connectivity == 18 && nonzero > 2)) {
          continue;
        }
        offsets.emplace_back(dx, dy, dz);
      }
    }
  }
  std::unordered_map<aggregation::VoxelId, bool> visited;
  visited.reserve(voxels.size());
  for (auto v : voxels) {
    visited.emplace(v, false);
  }
  std::vector<VoxelSet> out;
  for (auto seed : voxels) {
    if (visited[seed]) {
      continue;
    }
    VoxelSet comp;
    std::deque<aggregation::VoxelId> queue{seed};
    visited[seed] = true;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (const auto & o : offsets) {
        const auto n = grid.find(grid[v].key + o);
        if (!n) {
          continue;
        }
        const auto it = visited.find(*n);
        if (it != visited.end() && !it->second) {
          it->second = true;
          queue.push_back(*n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

VoxelSet reduceBleeding(
  const VoxelSet & cluster, const segmenter::Bitmask & mask, const alignment::PixelVoxelMap & map,
  const BleedingParams & params)
{
  requireSameSize(mask, map);
  if (cluster.empty()) {
    return cluster;
  }
  struct Stats
  {
    double depth_sum{};
    int pixels{};
    bool at_border{};
  };
  std::map<aggregation::VoxelId, Stats> stats;
  for (auto v : cluster) {
    stats.emplace(v, Stats{});
  }
  auto near_outside = [&](int x, int y) {
    for (int dy = -params.border; dy <= params.border; ++dy) {
      for (int dx = -params.border; dx <= params.border; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        // Off-raster counts as outside.
        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height || !mask.at(nx, ny)) {
          return true;
        }
      }
    }
    return false;
  };
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::size_t i = map.index(x, y);
      if (!mask.bits[i] || !map.mapped(i)) {
        continue;
      }
      const auto it = stats.find(static_cast<aggregation::VoxelId>(map.voxel[i]));
      if (it == stats.end()) {
        continue;
      }
      it->second.depth_sum += map.depth[i];
      ++it->second.pixels;
      it->second.at_border = it->second.at_border || near_outside(x, y);
    }
  }
  std::vector<double> depths;
  for (const auto & [v, s] : stats) {
    if (s.pixels > 0) {
      depths.push_back(s.depth_sum / s.pixels);
    }
  }
  if (depths.empty()) {
    return cluster;
  }
  std::nth_element(depths.begin(), depths.begin() + static_cast<std::ptrdiff_t>(depths.size() / 2), depths.end());
  const double median = depths[depths.size() / 2];

  VoxelSet kept;
  for (auto v : cluster) {
    const Stats & s = stats[v];
    const bool drop = s.pixels > 0 && s.at_border && std::abs(s.depth_sum / s.pixels - median) > params.depth_dev;
    if (!drop) {
      kept.push_back(v);
    }
  }
  const auto dropped = static_cast<double>(cluster.size() - kept.size());
  if (dropped > params.max_drop * static_cast<double>(cluster.size())) {
    return cluster;
  }
  return kept;
}

}  // namespace preseg::reconstruction
