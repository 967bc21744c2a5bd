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

#ifndef PRESEG__ALIGNMENT__RIG_OPTIMIZER_HPP_
#define PRESEG__ALIGNMENT__RIG_OPTIMIZER_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/metric_model.hpp"
#include "preseg/alignment/pseudo_color.hpp"

#include <span>
#include <vector>

namespace preseg::alignment
{

struct RigSearchParams
{
  double t_half_range{4.0};   // m, t grid spans initial t +- this
  double t_step{0.25};        // m
  double alpha_step{0.017453292519943295};  // rad (1 deg)
  int batch_size{8};
  int max_rounds{20};
};

struct RigBatchStep
{
  int round{};
  double t{};
  double alpha{};
  double distance_before{};
  double distance_after{};
  bool t_accepted{};
};

struct RigOptimizationTrace
{
  int rounds{};
  std::vector<RigBatchStep> steps;
};

/// Colored render of one camera.
PseudoImage renderPseudoImage(
  const aggregation::VoxelGrid & grid, std::span<const double> hues, const Camera & camera,
  const PseudoColorParams & color);

/// Mean domain distance of the rig's primary camera over the given keyframes.
double meanDomainDistance(
  std::span<const aggregation::VoxelGrid> keyframes, const MetricModel & model, const Camera & camera,
  const PseudoColorParams & color);

/// Greedy alternating search over height t and pitch alpha of the primary
/// camera. Per batch of keyframes: each keyframe picks the t on the grid with
/// the smallest domain distance and the picks are averaged; the averaged t is
/// kept only if it does not raise the batch's mean distance. Then each
/// keyframe picks the pitch in [alpha_min, alpha_max] that maps the most
/// pixels and the picks are averaged. Stops when a full round moves neither
/// parameter by a grid step, or after max_rounds.
/// Throws Error(kParameter) for an empty keyframe set or empty pitch range.
PseudoCameraRig optimizeRig(
  std::span<const aggregation::VoxelGrid> keyframes, const MetricModel & model, const PseudoCameraRig & initial,
  const RigSearchParams & search, const PseudoColorParams & color, RigOptimizationTrace * trace = nullptr);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__RIG_OPTIMIZER_HPP_
