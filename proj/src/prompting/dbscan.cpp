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

#include "preseg/prompting/dbscan.hpp"

#include "preseg/common/error.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

namespace preseg::prompting
{

namespace
{

struct CellHash
{
  std::size_t operator()(const Eigen::Vector3i & k) const noexcept
  {
    return static_cast<std::size_t>(
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x())) * 73856093ull ^
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y())) * 19349663ull ^
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.z())) * 83492791ull);
  }
};

// Uniform grid with eps-sized cells; a radius query scans the 27 cells around
// the query point.
class GridIndex
{
public:
  GridIndex(std::span<const Eigen::Vector3d> points, double eps) : points_(points), eps_(eps)
  {
    for (std::size_t i = 0; i < points.size(); ++i) {
      cells_[cellOf(points[i])].push_back(i);
    }
  }

  void neighbors(std::size_t i, std::vector<std::size_t> & out) const
  {
    out.clear();
    const Eigen::Vector3i c = cellOf(points_[i]);
    const double eps2 = eps_ * eps_;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(c + Eigen::Vector3i(dx, dy, dz));
          if (it == cells_.end()) {
            continue;
          }
          for (auto j : it->second) {
            if ((points_[j] - points_[i]).squaredNorm() <= eps2) {
              out.push_back(j);
            }
          }
        }
      }
    }
  }

private:
  Eigen::Vector3i cellOf(const Eigen::Vector3d & p) const
  {
    return {static_cast<int>(std::floor(p.x() / eps_)), static_cast<int>(std::floor(p.y() / eps_)),
            static_cast<int>(std::floor(p.z() / eps_))};
  }

  std::span<const Eigen::Vector3d> points_;
  double eps_;
  std::unordered_map<Eigen::Vector3i, std::vector<std::size_t>, CellHash> cells_;
};

}  // namespace

std::vector<int> dbscan(std::span<const Eigen::Vector3d> points, const DbscanParams & params)
{
  if (!(params.eps > 0.0) || params.min_pts < 1) {
    throw Error(ErrorCode::kParameter, "dbscan needs eps > 0 and min_pts >= 1");
  }
  constexpr int kUnvisited = -2;
  std::vector<int> label(points.size(), kUnvisited);
  const GridIndex index(points, params.eps);
  std::vector<std::size_t> nbrs;
  std::vector<std::size_t> nbrs2;
  int next = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label[i] != kUnvisited) {
      continue;
    }
    index.neighbors(i, nbrs);
    if (static_cast<int>(nbrs.size()) < params.min_pts) {
      label[i] = kNoise;
      continue;
    }
    const int cluster = next++;
    label[i] = cluster;
    std::deque<std::size_t> queue(nbrs.begin(), nbrs.end());
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (label[j] == kNoise) {
        label[j] = cluster;  // border point
      }
      if (label[j] != kUnvisited) {
        continue;
      }
      label[j] = cluster;
      index.neighbors(j, nbrs2);
      if (static_cast<int>(nbrs2.size()) >= params.min_pts) {
        queue.insert(queue.end(), nbrs2.begin(), nbrs2.end());
      }
    }
  }
  return label;
}

}  // namespace preseg::prompting
