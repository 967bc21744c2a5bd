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

#include "preseg/prompting/prompts.hpp"

#include "preseg/aggregation/superframe.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace preseg::prompting
{

namespace
{

std::map<int, std::vector<std::size_t>> groupByLabel(const std::vector<int> & labels)
{
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) {
      groups[labels[i]].push_back(i);
    }
  }
  return groups;
}

Eigen::Vector3d centroid(std::span<const Eigen::Vector3d> pts, const std::vector<std::size_t> & members)
{
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (auto i : members) {
    c += pts[i];
  }
  return c / static_cast<double>(members.size());
}

}  // namespace

std::vector<PromptSet> bilevelPrompts(
  std::span<const Eigen::Vector3d> pts, std::uint32_t keyframe, const BilevelParams & params, int first_id)
{
  std::vector<PromptSet> out;
  if (pts.empty()) {
    return out;
  }
  const std::vector<int> high = dbscan(pts, params.high);
  const std::vector<int> low = dbscan(pts, params.low);
  const auto high_groups = groupByLabel(high);
  const auto low_groups = groupByLabel(low);
  std::map<int, Eigen::Vector3d> low_centers;
  for (const auto & [label, members] : low_groups) {
    low_centers[label] = centroid(pts, members);
  }

  int next_id = first_id;
  for (const auto & [label, members] : high_groups) {
    const Eigen::Vector3d c = centroid(pts, members);
    std::size_t source = members.front();
    double best = std::numeric_limits<double>::infinity();
    for (auto i : members) {
      const double d = (pts[i] - c).squaredNorm();
      if (d < best) {
        best = d;
        source = i;
      }
    }
    PromptSet ps;
    ps.object_id = next_id++;
    ps.keyframe = keyframe;
    ps.positives.push_back(pts[source]);
    ps.positive_sources.push_back(source);
    ps.cluster = members;

    int matched = low[source];
    if (matched == kNoise && !low_centers.empty()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto & [l, center] : low_centers) {
        const double d = (center - pts[source]).squaredNorm();
        if (d < nearest) {
          nearest = d;
          matched = l;
        }
      }
    }
    if (matched != kNoise) {
      std::vector<std::size_t> pool;
      for (auto i : low_groups.at(matched)) {
        if (high[i] != label) {
          pool.push_back(i);
        }
      }
      // Farthest-first traversal seeded by the positive.
      std::vector<double> gap(pool.size(), std::numeric_limits<double>::infinity());
      std::vector<bool> taken(pool.size(), false);
      Eigen::Vector3d last = pts[source];
      for (int n = 0; n < params.max_negatives && n < static_cast<int>(pool.size()); ++n) {
        std::size_t pick = 0;
        double far = -1.0;
        for (std::size_t k = 0; k < pool.size(); ++k) {
          if (taken[k]) {
            continue;
          }
          gap[k] = std::min(gap[k], (pts[pool[k]] - last).squaredNorm());
          if (gap[k] > far) {
            far = gap[k];
            pick = k;
          }
        }
        taken[pick] = true;
        last = pts[pool[pick]];
        ps.negatives.push_back(last);
      }
    }
    out.push_back(std::move(ps));
  }
  return out;
}

void propagatePrompts(
  PromptSet & prompts, std::span<const data::Pose> poses, std::span<const FrameView> views,
  double occlusion_tolerance)
{
  prompts.pixels.clear();
  for (const auto & view : views) {
    const data::Pose rel = aggregation::relativePose(poses, prompts.keyframe, view.frame);
    const auto & in = view.cam->intrinsics;
    auto emit = [&](const Eigen::Vector3d & p, bool positive) {
      const auto uvz = view.cam->project(rel.apply(p));
      if (!uvz) {
        return;
      }
      const double u = std::floor(uvz->x());
      const double v = std::floor(uvz->y());
      if (u < 0 || v < 0 || u >= in.width || v >= in.height) {
        return;
      }
      const int x = static_cast<int>(u);
      const int y = static_cast<int>(v);
      if (view.map != nullptr) {
        const std::size_t i = view.map->index(x, y);
        if (!view.map->mapped(i) || std::abs(view.map->depth[i] - uvz->z()) > occlusion_tolerance) {
          return;
        }
      }
      prompts.pixels.push_back({view.camera, view.frame, x, y, positive});
    };
    for (const auto & p : prompts.positives) {
      emit(p, true);
    }
    for (const auto & p : prompts.negatives) {
      emit(p, false);
    }
  }
}

}  // namespace preseg::prompting
