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

#ifndef PRESEG__TESTS__SUPPORT__FIXTURES_HPP_
#define PRESEG__TESTS__SUPPORT__FIXTURES_HPP_

#include "preseg/aggregation/voxel_grid.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace preseg::test
{

/// Grid holding one voxel per key (duplicates dropped), each with one member.
inline aggregation::VoxelGrid gridFromKeys(
  std::vector<aggregation::VoxelKey> keys, double edge, const std::vector<float> & intensities = {})
{
  std::vector<std::pair<aggregation::VoxelKey, float>> items;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    items.emplace_back(keys[i], intensities.empty() ? 0.5f : intensities[i]);
  }
  std::sort(items.begin(), items.end(), [](const auto & a, const auto & b) {
    return std::tie(a.first.x(), a.first.y(), a.first.z()) < std::tie(b.first.x(), b.first.y(), b.first.z());
  });
  items.erase(std::unique(items.begin(), items.end(), [](const auto & a, const auto & b) { return a.first == b.first; }),
              items.end());
  std::vector<aggregation::Voxel> voxels;
  for (std::uint32_t i = 0; i < items.size(); ++i) {
    aggregation::Voxel v;
    v.key = items[i].first;
    v.members = {i};
    v.mean_intensity = items[i].second;
    v.center = (v.key.cast<double>() + Eigen::Vector3d::Constant(0.5)) * edge;
    voxels.push_back(std::move(v));
  }
  const std::size_t n = voxels.size();
  return aggregation::VoxelGrid(edge, std::move(voxels), n);
}

}  // namespace preseg::test

#endif  // PRESEG__TESTS__SUPPORT__FIXTURES_HPP_
