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

#ifndef PRESEG__RECONSTRUCTION__SMOOTHING_HPP_
#define PRESEG__RECONSTRUCTION__SMOOTHING_HPP_

#include <Eigen/Core>

#include <map>
#include <span>
#include <vector>

namespace preseg::reconstruction
{

/// One single scan with per-point instance labels; label 0 is unlabeled.
/// Points are in a frame shared by the whole sequence (world).
struct LabeledScan
{
  std::vector<Eigen::Vector3d> points;
  std::vector<int> labels;
};

struct SmoothingParams
{
  double center_distance{0.3};  // m
  double side_ratio{0.2};       // max |a - b| / max(a, b) per box axis
};

/// Links labels of consecutive scans whose point centroids and box side
/// lengths agree, closes the links transitively and maps each group to its
/// smallest label. Labels absent from the result are unchanged.
std::map<int, int> interframeSmoothing(std::span<const LabeledScan> scans, const SmoothingParams & params = {});

void applyRemap(std::vector<int> & labels, const std::map<int, int> & remap);

}  // namespace preseg::reconstruction

#endif  // PRESEG__RECONSTRUCTION__SMOOTHING_HPP_
