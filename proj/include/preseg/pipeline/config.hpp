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

#ifndef PRESEG__PIPELINE__CONFIG_HPP_
#define PRESEG__PIPELINE__CONFIG_HPP_

#include "preseg/aggregation/ground_split.hpp"
#include "preseg/aggregation/keyframes.hpp"
#include "preseg/alignment/camera.hpp"
#include "preseg/alignment/metric_model.hpp"
#include "preseg/alignment/pseudo_color.hpp"
#include "preseg/alignment/rig_optimizer.hpp"
#include "preseg/ground/ground_labeler.hpp"
#include "preseg/prompting/prompts.hpp"
#include "preseg/reconstruction/lift.hpp"
#include "preseg/reconstruction/nms.hpp"
#include "preseg/reconstruction/smoothing.hpp"
#include "preseg/segmenter/mock_segmenter.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace preseg::pipeline
{

/// Overrides `segmenter.backend` with remote:<url> when set.
inline constexpr const char * kRemoteUrlEnv = "PRESEG_SEGMENTER_URL";

struct SegmenterConfig
{
  std::string backend{"mock"};  // "mock" or "remote:<url>"
  segmenter::MockParams mock;
  int timeout_seconds{300};

  bool remote() const { return backend.rfind("remote:", 0) == 0; }
  std::string url() const { return remote() ? backend.substr(7) : std::string(); }
};

struct AlignmentConfig
{
  alignment::PseudoCameraRig rig;
  double focal{540.0};  // px; the principal point sits at the raster center
  bool optimize_rig{true};
  alignment::RigSearchParams search;
  alignment::PseudoColorParams color;
  /// Saved metric model. Empty: fit one on a generated dead-leaves corpus.
  std::string metric_model;
  alignment::MetricFitParams metric;
  int corpus_size{256};
};

struct PipelineConfig
{
  std::string manifest;
  std::string output_dir{"out"};
  std::uint64_t seed{0};

  aggregation::KeyframeThresholds keyframes;
  std::uint32_t superframe_half_width{10};
  aggregation::GroundSplitParams ground_split;
  double voxel_edge{0.1};

  AlignmentConfig alignment;

  prompting::BilevelParams prompts;
  double occlusion_tolerance{0.5};
  SegmenterConfig segmenter;

  int connectivity{26};
  reconstruction::BleedingParams bleeding;
  reconstruction::MergeRule merge;
  int label_growth_rounds{-1};
  bool enable_nms4d{true};
  double psi_threshold{0.3};
  bool enable_smoothing{true};
  reconstruction::SmoothingParams smoothing;

  double ground_cell{0.2};
  int ground_window{2};
  int ground_bins{16};
  ground::FcmParams fcm;
};

nlohmann::json toJson(const PipelineConfig & config);
/// Starts from the defaults and overlays `j`. Throws Error(kConfig) for
/// unknown keys, wrong types or out-of-domain values.
PipelineConfig configFromJson(const nlohmann::json & j);
PipelineConfig loadConfig(const std::filesystem::path & path);
/// Throws Error(kConfig) naming the first parameter outside its domain.
void validate(const PipelineConfig & config);
/// Applies kRemoteUrlEnv if it is set and non-empty.
void applyEnvironment(PipelineConfig & config);

}  // namespace preseg::pipeline

#endif  // PRESEG__PIPELINE__CONFIG_HPP_
