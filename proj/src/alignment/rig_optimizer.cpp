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

#include "preseg/alignment/rig_optimizer.hpp"

#include "preseg/common/error.hpp"
#include "preseg/common/parallel.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace preseg::alignment
{

PseudoImage renderPseudoImage(
  const aggregation::VoxelGrid & grid, std::span<const double> hues, const Camera & camera,
  const PseudoColorParams & color)
{
  PseudoImage image = projectVoxels(grid, camera);
  pseudoColor(image, hues, color);
  return image;
}

namespace
{

struct PreparedKeyframe
{
  const aggregation::VoxelGrid * grid;
  std::vector<double> hues;
};

double distanceAt(const PreparedKeyframe & kf, const MetricModel & model, const Camera & camera,
                  const PseudoColorParams & color)
{
  const PseudoImage image = renderPseudoImage(*kf.grid, kf.hues, camera, color);
  return domainDistance(model, toGray(image.rgb));
}

std::vector<double> grid1d(double lo, double hi, double step)
{
  std::vector<double> values;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) {
    values.push_back(lo + step * i);
  }
  return values;
}

double batchMeanDistance(
  std::span<const PreparedKeyframe> batch, const MetricModel & model, const PseudoCameraRig & rig,
  const PseudoColorParams & color)
{
  std::vector<double> d(batch.size());
  const Camera camera = rig.primaryCamera();
  parallelFor(batch.size(), [&](std::size_t i) { d[i] = distanceAt(batch[i], model, camera, color); });
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

}  // namespace

double meanDomainDistance(
  std::span<const aggregation::VoxelGrid> keyframes, const MetricModel & model, const Camera & camera,
  const PseudoColorParams & color)
{
  if (keyframes.empty()) {
    throw Error(ErrorCode::kParameter, "no keyframes");
  }
  std::vector<double> d(keyframes.size());
  parallelFor(keyframes.size(), [&](std::size_t i) {
    PreparedKeyframe kf{&keyframes[i], voxelHues(keyframes[i])};
    d[i] = distanceAt(kf, model, camera, color);
  });
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

PseudoCameraRig optimizeRig(
  std::span<const aggregation::VoxelGrid> keyframes, const MetricModel & model, const PseudoCameraRig & initial,
  const RigSearchParams & search, const PseudoColorParams & color, RigOptimizationTrace * trace)
{
  if (keyframes.empty()) {
    throw Error(ErrorCode::kParameter, "rig optimization needs at least one keyframe");
  }
  if (!(initial.alpha_min <= initial.alpha_max)) {
    throw Error(ErrorCode::kParameter, "empty pitch range");
  }
  if (search.t_step <= 0 || search.alpha_step <= 0 || search.batch_size <= 0 || search.max_rounds <= 0) {
    throw Error(ErrorCode::kParameter, "invalid rig search parameters");
  }
  color.validate();

  std::vector<PreparedKeyframe> prepared(keyframes.size());
  parallelFor(keyframes.size(), [&](std::size_t i) {
    prepared[i] = PreparedKeyframe{&keyframes[i], voxelHues(keyframes[i])};
  });

  const std::vector<double> t_grid =
    grid1d(initial.t - search.t_half_range, initial.t + search.t_half_range, search.t_step);
  const std::vector<double> alpha_grid = grid1d(initial.alpha_min, initial.alpha_max, search.alpha_step);

  PseudoCameraRig rig = initial;
  int round = 0;
  while (round < search.max_rounds) {
    ++round;
    bool moved = false;
    for (std::size_t begin = 0; begin < prepared.size(); begin += static_cast<std::size_t>(search.batch_size)) {
      const std::size_t end = std::min(prepared.size(), begin + static_cast<std::size_t>(search.batch_size));
      const std::span<const PreparedKeyframe> batch(prepared.data() + begin, end - begin);
      RigBatchStep step;
      step.round = round;

      // Height: every keyframe votes for its best t at the current pitch.
      std::vector<double> t_pick(batch.size());
      parallelFor(batch.size(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (const double t : t_grid) {
          const double d = distanceAt(batch[i], model, rig.with(t, rig.alpha).primaryCamera(), color);
          if (d < best) {
            best = d;
            t_pick[i] = t;
          }
        }
      });
      const double t_new = std::accumulate(t_pick.begin(), t_pick.end(), 0.0) / static_cast<double>(t_pick.size());
      const double before = batchMeanDistance(batch, model, rig, color);
      const PseudoCameraRig candidate = rig.with(t_new, rig.alpha);
      const double after = batchMeanDistance(batch, model, candidate, color);
      step.distance_before = before;
      if (after <= before) {
        moved = moved || std::abs(t_new - rig.t) >= search.t_step;
        rig = candidate;
        step.t_accepted = true;
        step.distance_after = after;
      } else {
        step.distance_after = before;
      }

      // Pitch: every keyframe votes for the pitch mapping the most pixels.
      std::vector<double> alpha_pick(batch.size());
      parallelFor(batch.size(), [&](std::size_t i) {
        std::size_t best = 0;
        bool first = true;
        for (const double a : alpha_grid) {
          const std::size_t mapped = projectVoxels(*batch[i].grid, rig.with(rig.t, a).primaryCamera()).map.mappedCount();
          if (first || mapped > best) {
            best = mapped;
            alpha_pick[i] = a;
            first = false;
          }
        }
      });
      const double alpha_new =
        std::accumulate(alpha_pick.begin(), alpha_pick.end(), 0.0) / static_cast<double>(alpha_pick.size());
      moved = moved || std::abs(alpha_new - rig.alpha) >= search.alpha_step;
      rig = rig.with(rig.t, alpha_new);

      step.t = rig.t;
      step.alpha = rig.alpha;
      if (trace != nullptr) {
        trace->steps.push_back(step);
      }
    }
    if (!moved) {
      break;
    }
  }
  if (trace != nullptr) {
    trace->rounds = round;
  }
  return rig;
}

}  // namespace preseg::alignment
