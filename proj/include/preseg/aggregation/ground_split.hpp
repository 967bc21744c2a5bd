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

#ifndef PRESEG__AGGREGATION__GROUND_SPLIT_HPP_
#define PRESEG__AGGREGATION__GROUND_SPLIT_HPP_

#include "preseg/aggregation/superframe.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace preseg::aggregation
{

struct GroundSplitParams
{
  double cell{1.0};              // m, XY cell edge
  double plane_tol{0.15};        // m, max point-to-plane distance for ground
  double normal_max_tilt{0.2617993877991494};  // rad (15 deg)
  double seed_height{0.15};       // m above the lowest point of a cell that still seeds the fit
  /// Accepted planes must sit within this height of the median plane height
  /// over all cells. Keeps flat object tops (car roofs) out of the ground.
  double height_gate{0.6};
  bool ceiling{false};
};

struct PlaneFit
{
  Eigen::Vector2i cell;
  Eigen::Vector3d normal;  // unit, z component > 0
  double offset{};         // normal . p + offset = 0
  bool ceiling{false};
};

/// Indices refer to Superframe::points; together they partition it.
struct GroundSplit
{
  std::vector<std::uint32_t> object;
  std::vector<std::uint32_t> ground;
  std::vector<PlaneFit> planes;
};

GroundSplit splitGround(const Superframe & superframe, const GroundSplitParams & params = {});

}  // namespace preseg::aggregation

#endif  // PRESEG__AGGREGATION__GROUND_SPLIT_HPP_
