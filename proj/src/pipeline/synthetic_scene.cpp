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

#include "preseg/pipeline/synthetic_scene.hpp"

#include "preseg/data/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>

namespace preseg::pipeline
{

namespace
{

// Slab test; distance along a unit ray to the first hit in front of the origin.
std::optional<double> hitBox(const Eigen::Vector3d & o, const Eigen::Vector3d & d, const Eigen::Vector3d & lo,
                             const Eigen::Vector3d & hi)
{
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-12) {
      if (o[a] < lo[a] || o[a] > hi[a]) {
        return std::nullopt;
      }
      continue;
    }
    double near = (lo[a] - o[a]) / d[a];
    double far = (hi[a] - o[a]) / d[a];
    if (near > far) {
      std::swap(near, far);
    }
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) {
      return std::nullopt;
    }
  }
  return t0 > 0.0 ? std::optional<double>(t0) : std::nullopt;
}

// Lanes of different reflectivity so the ground is not one flat texture.
float groundIntensity(const Eigen::Vector3d & p)
{
  const double y = std::abs(p.y());
  if (y < 0.1) {
    return 0.45f;  // center marking
  }
  return y < 4.0 ? 0.08f : 0.22f;
}

}  // namespace

SyntheticSceneParams SyntheticSceneParams::standard()
{
  SyntheticSceneParams p;
  p.boxes = {
    {{8.0, 6.0}, {0.0, 0.0}, {4.0, 2.0, 1.6}, 0.15f},
    {{15.0, -6.5}, {0.0, 0.0}, {2.0, 2.0, 2.5}, 0.35f},
    {{25.0, 7.0}, {0.0, 0.0}, {5.0, 2.2, 2.0}, 0.55f},
    {{5.0, -3.5}, {0.2, 0.0}, {4.0, 1.8, 1.5}, 0.75f},
    {{30.0, 3.5}, {-0.15, 0.0}, {4.2, 1.9, 1.6}, 0.95f},
  };
  return p;
}

PipelineConfig syntheticSceneConfig()
{
  PipelineConfig c;
  c.seed = 7;
  c.superframe_half_width = 2;
  c.voxel_edge = 0.2;
  auto & a = c.alignment;
  a.rig.intrinsics.width = 480;
  a.rig.intrinsics.height = 320;
  a.focal = 240.0;
  a.search.t_half_range = 1.0;
  a.search.t_step = 0.5;
  a.search.alpha_step = 5.0 * M_PI / 180.0;
  a.search.max_rounds = 3;
  // Keeps the silhouette brightening small so one box stays one color for
  // the flood-fill segmenter.
  a.color.beta2 = 0.04;
  a.metric.clusters = 8;
  a.metric.crop_width = 480;
  a.metric.crop_height = 320;
  a.corpus_size = 64;
  c.prompts.high.min_pts = 6;
  // Grazing views through 0.2 m voxels put the front-most voxel up to ~0.7 m
  // ahead of the prompt's own voxel.
  c.occlusion_tolerance = 1.0;
  return c;
}

SyntheticScene makeSyntheticScene(const SyntheticSceneParams & params)
{
  SyntheticScene scene;
  scene.boxes = params.boxes;
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> range_noise(0.0, params.range_noise);
  std::normal_distribution<double> intensity_noise(0.0, params.intensity_noise);

  for (std::uint32_t f = 0; f < params.frames; ++f) {
    const Eigen::Vector3d origin(params.speed * f, 0.0, params.sensor_height);
    scene.poses.push_back(data::Pose::fromRotationTranslation(Eigen::Matrix3d::Identity(), origin));

    std::vector<Eigen::Vector3d> lo;
    std::vector<Eigen::Vector3d> hi;
    for (const auto & b : params.boxes) {
      const Eigen::Vector2d c = b.centerAt(f);
      lo.emplace_back(c.x() - b.size.x() / 2, c.y() - b.size.y() / 2, 0.0);
      hi.emplace_back(c.x() + b.size.x() / 2, c.y() + b.size.y() / 2, b.size.z());
    }

    data::PointFrame frame;
    frame.frame_index = f;
    data::FrameLabels labels;
    for (int beam = 0; beam < params.beams; ++beam) {
      const double elevation =
        params.fov_down + (params.fov_up - params.fov_down) * beam / std::max(1, params.beams - 1);
      for (int s = 0; s < params.azimuth_steps; ++s) {
        const double azimuth = 2.0 * M_PI * s / params.azimuth_steps;
        const Eigen::Vector3d d(std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                                std::sin(elevation));
        double best = params.max_range;
        int hit = -1;
        for (std::size_t k = 0; k < lo.size(); ++k) {
          if (const auto t = hitBox(origin, d, lo[k], hi[k]); t && *t < best) {
            best = *t;
            hit = static_cast<int>(k);
          }
        }
        float intensity = 0.0f;
        data::Label label;
        if (hit >= 0) {
          intensity = params.boxes[static_cast<std::size_t>(hit)].intensity;
          label = {kSyntheticBoxClass, static_cast<std::uint16_t>(hit + 1)};
        } else if (d.z() < 0.0 && -origin.z() / d.z() < params.max_range) {
          best = -origin.z() / d.z();
          intensity = groundIntensity(origin + best * d);
          label = {kSyntheticGroundClass, 0};
        } else {
          continue;
        }
        const Eigen::Vector3d p = (best + range_noise(rng)) * d;
        const double i = std::clamp(intensity + intensity_noise(rng), 0.0, 1.0);
        frame.points.push_back({static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()),
                                static_cast<float>(i)});
        labels.push_back(label);
      }
    }
    scene.frames.push_back(std::move(frame));
    scene.gt.push_back(std::move(labels));
  }
  return scene;
}

std::filesystem::path writeSyntheticScene(const SyntheticScene & scene, const std::filesystem::path & target)
{
  const auto dir = std::filesystem::absolute(target);
  std::filesystem::create_directories(dir / "velodyne");
  std::filesystem::create_directories(dir / "gt");
  data::SequenceManifest manifest;
  for (std::size_t f = 0; f < scene.frames.size(); ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu", f);
    const auto scan = dir / "velodyne" / (std::string(name) + ".bin");
    data::writePointFrame(scene.frames[f], scan);
    data::writeLabelFile(scene.gt[f], dir / "gt" / (std::string(name) + ".label"));
    manifest.frame_paths.push_back(scan.string());
  }
  data::writePoseFile(scene.poses, dir / "poses.txt");
  manifest.pose_path = (dir / "poses.txt").string();
  const auto path = dir / "manifest.json";
  data::writeManifest(manifest, path);
  return path;
}

}  // namespace preseg::pipeline
