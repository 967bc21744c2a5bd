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

#ifndef PRESEG__PIPELINE__SYNTHETIC_SCENE_HPP_
#define PRESEG__PIPELINE__SYNTHETIC_SCENE_HPP_

#include "preseg/data/types.hpp"
#include "preseg/pipeline/config.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace preseg::pipeline
{

inline constexpr std::uint16_t kSyntheticGroundClass = 40;
inline constexpr std::uint16_t kSyntheticBoxClass = 10;

/// Axis-aligned box resting on the ground plane z = 0 (world frame).
struct SyntheticBox
{
  Eigen::Vector2d start;     // footprint center at frame 0
  Eigen::Vector2d velocity;  // m per frame
  Eigen::Vector3d size;
  float intensity{};

  Eigen::Vector2d centerAt(std::uint32_t frame) const { return start + velocity * static_cast<double>(frame); }
};

struct SyntheticSceneParams
{
  std::uint32_t frames{40};
  double speed{0.5};            // m per frame along +x
  double sensor_height{1.8};    // m
  int beams{64};
  double fov_up{0.05235987755982988};     // rad (+3 deg)
  double fov_down{-0.4363323129985824};   // rad (-25 deg)
  int azimuth_steps{720};
  double max_range{50.0};
  double range_noise{0.01};     // m, standard deviation
  double intensity_noise{0.0};
  std::uint64_t seed{0};
  std::vector<SyntheticBox> boxes;

  /// Three static and two moving boxes along a straight road.
  static SyntheticSceneParams standard();
};

struct SyntheticScene
{
  std::vector<data::PointFrame> frames;
  std::vector<data::Pose> poses;
  /// Ground (class 40, instance 0) and boxes (class 10, instance = box index + 1).
  data::LabelMap gt;
  std::vector<SyntheticBox> boxes;
};

/// Ray-cast scans of the scene from a sensor driving along +x. Deterministic
/// for a given seed.
SyntheticScene makeSyntheticScene(const SyntheticSceneParams & params);

/// Pipeline settings sized for the synthetic scene: 0.2 m voxels, a small
/// raster and rig search, and a short dead-leaves corpus.
PipelineConfig syntheticSceneConfig();

/// Writes scans, poses, ground-truth labels (gt/) and manifest.json into `dir`.
/// Returns the manifest path.
std::filesystem::path writeSyntheticScene(const SyntheticScene & scene, const std::filesystem::path & dir);

}  // namespace preseg::pipeline

#endif  // PRESEG__PIPELINE__SYNTHETIC_SCENE_HPP_
