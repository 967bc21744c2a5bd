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

#include "preseg/reconstruction/smoothing.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <limits>

namespace preseg::reconstruction
{

namespace
{

struct Extent
{
  Eigen::Vector3d sum{Eigen::Vector3d::Zero()};
  Eigen::Vector3d lo{Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity())};
  Eigen::Vector3d hi{Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity())};
  std::size_t count{};

  Eigen::Vector3d centroid() const { return sum / static_cast<double>(count); }
  Eigen::Vector3d sides() const { return hi - lo; }
};

std::map<int, Extent> extents(const LabeledScan & scan)
{
  if (scan.points.size() != scan.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scan has " + std::to_string(scan.points.size()) + " points and " +
                                                 std::to_string(scan.labels.size()) + " labels");
  }
  std::map<int, Extent> out;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (scan.labels[i] == 0) {
      continue;
    }
    Extent & e = out[scan.labels[i]];
    e.sum += scan.points[i];
    e.lo = e.lo.cwiseMin(scan.points[i]);
    e.hi = e.hi.cwiseMax(scan.points[i]);
    ++e.count;
  }
  return out;
}

bool similarSides(const Eigen::Vector3d & a, const Eigen::Vector3d & b, double ratio)
{
  for (int k = 0; k < 3; ++k) {
    const double m = std::max(a[k], b[k]);
    if (m > 0.0 && std::abs(a[k] - b[k]) / m > ratio) {
      return false;
    }
  }
  return true;
}

class UnionFind
{
public:
  int find(int x)
  {
    auto it = parent_.try_emplace(x, x).first;
    if (it->second == x) {
      return x;
    }
    const int root = find(it->second);
    parent_[x] = root;
    return root;
  }

  void unite(int a, int b)
  {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[std::max(a, b)] = std::min(a, b);
    }
  }

  std::map<int, int> & parents() { return parent_; }

private:
  std::map<int, int> parent_;
};

}  // namespace

std::map<int, int> interframeSmoothing(std::span<const LabeledScan> scans, const SmoothingParams & params)
{
  UnionFind uf;
  std::map<int, Extent> prev;
  for (std::size_t f = 0; f < scans.size(); ++f) {
    auto cur = extents(scans[f]);
    for (const auto & [lb, eb] : cur) {
      uf.find(lb);
      for (const auto & [la, ea] : prev) {
        if (la == lb) {
          continue;
        }
        if ((ea.centroid() - eb.centroid()).norm() <= params.center_distance &&
            similarSides(ea.sides(), eb.sides(), params.side_ratio))
        {
          uf.unite(la, lb);
        }
      }
    }
    prev = std::move(cur);
  }
  std::map<int, int> out;
  std::vector<int> ids;
  for (const auto & [id, p] : uf.parents()) {
    ids.push_back(id);
  }
  for (int id : ids) {
    out[id] = uf.find(id);
  }
  return out;
}

void applyRemap(std::vector<int> & labels, const std::map<int, int> & remap)
{
  for (auto & l : labels) {
    const auto it = remap.find(l);
    if (it != remap.end()) {
      l = it->second;
    }
  }
}

}  // namespace preseg::reconstruction
