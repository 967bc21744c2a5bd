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

#ifndef PRESEG__PROMPTING__DBSCAN_HPP_
#define PRESEG__PROMPTING__DBSCAN_HPP_

#include <Eigen/Core>

#include <span>
#include <vector>

namespace preseg::prompting
{

struct DbscanParams
{
  double eps{0.5};  // m
  int min_pts{10};  // neighborhood size including the point itself
};

inline constexpr int kNoise = -1;

/// Cluster label per point (0, 1, ... in discovery order) or kNoise. Points
/// are visited in input order; a border point reachable from several clusters
/// joins the first one that reaches it.
std::vector<int> dbscan(std::span<const Eigen::Vector3d> points, const DbscanParams & params);

}  // namespace preseg::prompting

#endif  // PRESEG__PROMPTING__DBSCAN_HPP_
