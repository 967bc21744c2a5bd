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

#ifndef PRESEG__PIPELINE__PRESEGMENT_HPP_
#define PRESEG__PIPELINE__PRESEGMENT_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/metric_model.hpp"
#include "preseg/data/types.hpp"
#include "preseg/pipeline/config.hpp"
#include "preseg/reconstruction/nms.hpp"
#include "preseg/segmenter/segmenter.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace preseg::pipeline
{

struct ProgressEvent
{
  std::string stage;
  double fraction{};  // overall, never decreases within a run
  std::string message;
};

using ProgressSink = std::function<void(const ProgressEvent &)>;

struct Sequence
{
  std::vector<data::PointFrame> frames;
  std::vector<data::Pose> poses;
};

/// Throws Error(kMalformedFile) when scans and poses do not pair up.
Sequence loadSequence(const std::filesystem::path & manifest);

struct TrackEntry
{
  std::uint16_t id{};
  bool ground{};
  std::map<std::uint32_t, std::size_t> points;  // frame -> labeled point count
};

struct PresegmentResult
{
  data::LabelMap labels;  // instance ids only, semantic 0
  std::vector<TrackEntry> tracks;
  alignment::PseudoCameraRig rig;
  double rig_distance{};  // mean domain distance of the primary camera over keyframes
  std::vector<std::uint32_t> keyframes;
  std::vector<reconstruction::MergeDecision> merges;
};

/// The metric model named by the config, or one fitted on a generated
/// dead-leaves corpus seeded from `seed`.
alignment::MetricModel loadOrFitMetricModel(const AlignmentConfig & config, std::uint64_t seed);

/// Rig from the config with intrinsics filled in from width, height and focal.
alignment::PseudoCameraRig configuredRig(const AlignmentConfig & config);

/// Object voxel grid of every keyframe's superframe, in keyframe order.
std::vector<aggregation::VoxelGrid> keyframeGrids(
  const Sequence & sequence, const PipelineConfig & config, std::vector<std::uint32_t> * keyframes = nullptr);

std::unique_ptr<segmenter::Segmenter> makeSegmenter(const SegmenterConfig & config);

/// Runs every stage in memory. Errors come out as StageError tagged with the
/// failing stage.
PresegmentResult presegment(
  const Sequence & sequence, const PipelineConfig & config, segmenter::Segmenter & segmenter,
  const ProgressSink & progress = {});

nlohmann::json trackManifestJson(const std::vector<TrackEntry> & tracks);
std::vector<TrackEntry> trackManifestFromJson(const nlohmann::json & j);

/// Writes <dir>/labels/<frame:06d>.label, <dir>/tracks.json and <dir>/rig.json.
/// Everything is staged in a sibling directory first; on failure the staged
/// files are removed and `dir` is left as it was.
void writeResult(const PresegmentResult & result, const std::filesystem::path & dir);

/// Loads the sequence named by the config, runs the pipeline with the
/// configured backend and writes the result to config.output_dir.
PresegmentResult runPresegment(const PipelineConfig & config, const ProgressSink & progress = {});

}  // namespace preseg::pipeline

#endif  // PRESEG__PIPELINE__PRESEGMENT_HPP_
