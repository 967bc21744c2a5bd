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

#ifndef PRESEG__EVAL__PANOPTIC_HPP_
#define PRESEG__EVAL__PANOPTIC_HPP_

#include "preseg/data/types.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <vector>

namespace preseg::eval
{

/// Class 0 is "unlabeled": points with ground-truth class 0 are ignored.
struct ClassSpec
{
  std::set<std::uint16_t> things;

  bool isThing(std::uint16_t c) const { return things.count(c) != 0; }
  /// car, bicycle, bus, motorcycle, on-rails, truck, other-vehicle, person,
  /// bicyclist, motorcyclist in the usual LiDAR benchmark numbering.
  static ClassSpec lidarDefaults();
};

/// Predicted segments are the instance fields of `prediction` (0 = none),
/// global over the sequence. Each takes the majority ground-truth class over
/// all of its points (ties to the smaller class id).
std::map<std::uint16_t, std::uint16_t> semanticOracleAlign(const data::LabelMap & prediction, const data::LabelMap & gt);

/// Applies an alignment: semantic from the segment's class; things keep the
/// segment id renumbered 1..n per class by first appearance; stuff gets
/// instance 0 so all of a class merges.
data::LabelMap applyAlignment(
  const data::LabelMap & prediction, const std::map<std::uint16_t, std::uint16_t> & assignment, const ClassSpec & classes);

struct ClassScore
{
  double pq{};
  double sq{};
  double rq{};
  double iou{};
  std::size_t tp{};
  std::size_t fp{};
  std::size_t fn{};
  bool thing{};
};

struct PanopticReport
{
  std::map<std::uint16_t, ClassScore> classes;
  double pq{};
  double pq_things{};
  double pq_stuff{};
  double sq{};
  double rq{};
  double miou{};
};

/// Per-scan matching at IoU > 0.5, accumulated over scans. Thing segments are
/// (class, instance); stuff segments are whole classes. Throws
/// Error(kDimensionMismatch) when the label maps differ in shape.
PanopticReport panopticQuality(const data::LabelMap & aligned, const data::LabelMap & gt, const ClassSpec & classes);

/// Per-class IoU from the point confusion matrix, over classes present in
/// either map (ground-truth class 0 ignored).
std::map<std::uint16_t, double> classIoU(const data::LabelMap & aligned, const data::LabelMap & gt);

void writeKeyValue(std::ostream & out, const PanopticReport & report);
void writeRows(std::ostream & out, const PanopticReport & report);

}  // namespace preseg::eval

#endif  // PRESEG__EVAL__PANOPTIC_HPP_
