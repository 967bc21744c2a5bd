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

#ifndef PRESEG__RECONSTRUCTION__NMS_HPP_
#define PRESEG__RECONSTRUCTION__NMS_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/reconstruction/lift.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace preseg::reconstruction
{

/// Axis-aligned box; empty when any hi < lo.
struct Box
{
  Eigen::Vector3d lo{Eigen::Vector3d::Constant(1.0)};
  Eigen::Vector3d hi{Eigen::Vector3d::Constant(-1.0)};

  bool empty() const { return (hi.array() < lo.array()).any(); }
  double volume() const;
  Box merged(const Box & other) const;
  Box intersection(const Box & other) const;
};

/// Box around the cells (not the centers) of the given voxels.
Box voxelBox(const VoxelSet & voxels, const aggregation::VoxelGrid & grid);

double boxIoU(const Box & a, const Box & b);
/// Intersection volume over the smaller box volume.
double boxContainment(const Box & a, const Box & b);

struct MergeRule
{
  double iou{0.5};
  double containment{0.8};
};

/// The 3D NMS merge condition, also used per frame by the 4D variant.
bool equivalent(const Box & a, const Box & b, const MergeRule & rule = {});

struct Candidate
{
  int id{};
  VoxelSet voxels;
};

struct Nms3dResult
{
  std::vector<Candidate> kept;  // merged clusters, largest first
  std::vector<int> labels;      // per grid voxel, kUnlabeled when no cluster claims it
};

inline constexpr int kUnlabeled = -1;

/// Greedy box NMS that merges instead of suppressing. Candidates are visited
/// by size (ties by id); each joins the first kept cluster it is equivalent
/// to, and passes repeat until nothing merges. Voxels claimed by several
/// kept clusters go to the largest one.
Nms3dResult nms3d(std::vector<Candidate> candidates, const aggregation::VoxelGrid & grid, const MergeRule & rule = {});

/// Synchronous frontier rounds over 26-neighbors: an unlabeled voxel takes
/// the most frequent neighbor label, ties to the smallest label.
/// `max_rounds` < 0 means until nothing changes.
void labelGrowth(std::vector<int> & labels, const aggregation::VoxelGrid & grid, int max_rounds = -1);

struct TrackFrame
{
  VoxelSet voxels;  // ids in that frame's grid
  Box box;
};

struct ObjectTrack
{
  int id{};
  std::map<std::uint32_t, TrackFrame> frames;

  std::uint32_t firstFrame() const { return frames.begin()->first; }
  std::uint32_t lastFrame() const { return frames.rbegin()->first; }
  std::size_t voxelCount() const;
};

/// Adds voxels to a track frame and grows its box.
void addToTrack(ObjectTrack & track, std::uint32_t frame, const VoxelSet & voxels, const aggregation::VoxelGrid & grid);

/// Frames of either track where the merge condition holds, over the
/// overlap of the two frame spans (last-of-firsts to first-of-lasts, no +1).
/// Empty when that span is not positive.
std::optional<double> temporalEquivalence(const ObjectTrack & a, const ObjectTrack & b, const MergeRule & rule = {});

struct MergeDecision
{
  int id1{};
  int id2{};
  std::optional<double> psi;
  bool merged{};
};

struct Nms4dResult
{
  std::vector<ObjectTrack> tracks;
  std::map<int, int> remap;  // input id -> surviving id
  std::vector<MergeDecision> decisions;
};

/// Repeatedly merges the first qualifying pair in (size desc, id asc) order
/// and re-evaluates against the merged track. The larger track keeps its id.
Nms4dResult nms4d(std::vector<ObjectTrack> tracks, double threshold, const MergeRule & rule = {});

}  // namespace preseg::reconstruction

#endif  // PRESEG__RECONSTRUCTION__NMS_HPP_
