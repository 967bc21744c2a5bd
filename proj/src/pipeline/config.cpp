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

#include "preseg/pipeline/config.hpp"

#include "preseg/common/error.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace preseg::pipeline
{

namespace
{

using nlohmann::json;

// Every configurable field with its path in the nested file layout. One
// listing serves the writer, the reader and the unknown-key check.
template <typename Config, typename Visitor>
void fields(Config & c, Visitor && v)
{
  v("manifest", c.manifest);
  v("output_dir", c.output_dir);
  v("seed", c.seed);

  v("aggregation/keyframe_translation", c.keyframes.translation);
  v("aggregation/keyframe_rotation", c.keyframes.rotation);
  v("aggregation/superframe_half_width", c.superframe_half_width);
  v("aggregation/voxel_edge", c.voxel_edge);
  v("aggregation/ground/cell", c.ground_split.cell);
  v("aggregation/ground/plane_tol", c.ground_split.plane_tol);
  v("aggregation/ground/normal_max_tilt", c.ground_split.normal_max_tilt);
  v("aggregation/ground/seed_height", c.ground_split.seed_height);
  v("aggregation/ground/height_gate", c.ground_split.height_gate);
  v("aggregation/ground/ceiling", c.ground_split.ceiling);

  auto & a = c.alignment;
  v("alignment/width", a.rig.intrinsics.width);
  v("alignment/height", a.rig.intrinsics.height);
  v("alignment/focal", a.focal);
  v("alignment/yaw_offsets", a.rig.yaw_offsets);
  v("alignment/t", a.rig.t);
  v("alignment/alpha", a.rig.alpha);
  v("alignment/alpha_min", a.rig.alpha_min);
  v("alignment/alpha_max", a.rig.alpha_max);
  v("alignment/orbit_radius", a.rig.orbit_radius);
  v("alignment/optimize_rig", a.optimize_rig);
  v("alignment/search/t_half_range", a.search.t_half_range);
  v("alignment/search/t_step", a.search.t_step);
  v("alignment/search/alpha_step", a.search.alpha_step);
  v("alignment/search/batch_size", a.search.batch_size);
  v("alignment/search/max_rounds", a.search.max_rounds);
  v("alignment/color/saturation", a.color.saturation);
  v("alignment/color/beta1", a.color.beta1);
  v("alignment/color/beta2", a.color.beta2);
  v("alignment/color/kernel_radius", a.color.kernel_radius);
  v("alignment/metric_model", a.metric_model);
  v("alignment/metric/bins", a.metric.bins);
  v("alignment/metric/clusters", a.metric.clusters);
  v("alignment/metric/max_iterations", a.metric.max_iterations);
  v("alignment/metric/crop_width", a.metric.crop_width);
  v("alignment/metric/crop_height", a.metric.crop_height);
  v("alignment/corpus_size", a.corpus_size);

  v("prompting/high/eps", c.prompts.high.eps);
  v("prompting/high/min_pts", c.prompts.high.min_pts);
  v("prompting/low/eps", c.prompts.low.eps);
  v("prompting/low/min_pts", c.prompts.low.min_pts);
  v("prompting/max_negatives", c.prompts.max_negatives);
  v("prompting/occlusion_tolerance", c.occlusion_tolerance);

  v("segmenter/backend", c.segmenter.backend);
  v("segmenter/tolerance", c.segmenter.mock.tolerance);
  v("segmenter/max_halvings", c.segmenter.mock.max_halvings);
  v("segmenter/timeout_seconds", c.segmenter.timeout_seconds);

  v("reconstruction/connectivity", c.connectivity);
  v("reconstruction/bleeding/depth_dev", c.bleeding.depth_dev);
  v("reconstruction/bleeding/border", c.bleeding.border);
  v("reconstruction/bleeding/max_drop", c.bleeding.max_drop);
  v("reconstruction/merge/iou", c.merge.iou);
  v("reconstruction/merge/containment", c.merge.containment);
  v("reconstruction/label_growth_rounds", c.label_growth_rounds);
  v("reconstruction/enable_nms4d", c.enable_nms4d);
  v("reconstruction/psi_threshold", c.psi_threshold);
  v("reconstruction/enable_smoothing", c.enable_smoothing);
  v("reconstruction/smoothing/center_distance", c.smoothing.center_distance);
  v("reconstruction/smoothing/side_ratio", c.smoothing.side_ratio);

  v("ground/cell", c.ground_cell);
  v("ground/window", c.ground_window);
  v("ground/bins", c.ground_bins);
  v("ground/clusters", c.fcm.clusters);
  v("ground/fuzzifier", c.fcm.fuzzifier);
  v("ground/tolerance", c.fcm.tolerance);
  v("ground/max_iterations", c.fcm.max_iterations);
}

json::json_pointer pointer(const char * path)
{
  return json::json_pointer(std::string("/") + path);
}

[[noreturn]] void configError(const std::string & message)
{
  throw Error(ErrorCode::kConfig, message);
}

template <typename T>
void read(const json & j, const std::string & key, T & out)
{
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) {
      configError(key + ": expected a boolean");
    }
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) {
      configError(key + ": expected a string");
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer() || (std::is_unsigned_v<T> && j.get<std::int64_t>() < 0)) {
      configError(key + (std::is_unsigned_v<T> ? ": expected a non-negative integer" : ": expected an integer"));
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) {
      configError(key + ": expected a number");
    }
  } else {
    if (!j.is_array()) {
      configError(key + ": expected an array of numbers");
    }
    for (const auto & e : j) {
      if (!e.is_number()) {
        configError(key + ": expected an array of numbers");
      }
    }
  }
  out = j.get<T>();
}

void checkKeys(const json & j, const std::string & prefix, const std::set<std::string> & leaves)
{
  if (!j.is_object()) {
    configError((prefix.empty() ? std::string("config") : prefix) + ": expected an object");
  }
  for (const auto & [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "/" + key;
    if (leaves.count(path) != 0) {
      continue;
    }
    const auto below = leaves.lower_bound(path + "/");
    if (below != leaves.end() && below->rfind(path + "/", 0) == 0) {
      checkKeys(value, path, leaves);
      continue;
    }
    configError("unknown key '" + path + "'");
  }
}

void require(bool ok, const char * what)
{
  if (!ok) {
    configError(std::string("out of domain: ") + what);
  }
}

}  // namespace

json toJson(const PipelineConfig & config)
{
  json j = json::object();
  fields(config, [&](const char * path, const auto & value) { j[pointer(path)] = value; });
  return j;
}

PipelineConfig configFromJson(const json & j)
{
  PipelineConfig config;
  std::set<std::string> leaves;
  fields(config, [&](const char * path, const auto &) { leaves.insert(path); });
  checkKeys(j, "", leaves);
  fields(config, [&](const char * path, auto & value) {
    const auto p = pointer(path);
    if (j.contains(p)) {
      read(j.at(p), path, value);
    }
  });
  validate(config);
  return config;
}

PipelineConfig loadConfig(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & e) {
    configError(path.string() + ": " + e.what());
  }
  return configFromJson(j);
}

void validate(const PipelineConfig & c)
{
  require(c.keyframes.translation > 0.0, "aggregation/keyframe_translation > 0");
  require(c.keyframes.rotation > 0.0, "aggregation/keyframe_rotation > 0");
  require(c.voxel_edge > 0.0, "aggregation/voxel_edge > 0");
  require(c.ground_split.cell > 0.0, "aggregation/ground/cell > 0");
  require(c.ground_split.plane_tol > 0.0, "aggregation/ground/plane_tol > 0");
  require(c.ground_split.normal_max_tilt > 0.0 && c.ground_split.normal_max_tilt < M_PI / 2,
          "aggregation/ground/normal_max_tilt in (0, pi/2)");
  require(c.ground_split.seed_height >= 0.0, "aggregation/ground/seed_height >= 0");
  require(c.ground_split.height_gate > 0.0, "aggregation/ground/height_gate > 0");

  const auto & a = c.alignment;
  require(a.rig.intrinsics.width > 0 && a.rig.intrinsics.height > 0, "alignment/width and height > 0");
  require(a.focal > 0.0, "alignment/focal > 0");
  require(!a.rig.yaw_offsets.empty(), "alignment/yaw_offsets non-empty");
  require(a.rig.alpha_min <= a.rig.alpha_max, "alignment/alpha_min <= alpha_max");
  require(a.rig.alpha >= a.rig.alpha_min && a.rig.alpha <= a.rig.alpha_max, "alignment/alpha within [alpha_min, alpha_max]");
  require(a.rig.orbit_radius >= 0.0, "alignment/orbit_radius >= 0");
  require(a.search.t_half_range >= 0.0, "alignment/search/t_half_range >= 0");
  require(a.search.t_step > 0.0, "alignment/search/t_step > 0");
  require(a.search.alpha_step > 0.0, "alignment/search/alpha_step > 0");
  require(a.search.batch_size > 0, "alignment/search/batch_size > 0");
  require(a.search.max_rounds > 0, "alignment/search/max_rounds > 0");
  try {
    a.color.validate();
  } catch (const Error & e) {
    configError("alignment/color: " + e.detail());
  }
  require(a.metric.bins > 0, "alignment/metric/bins > 0");
  require(a.metric.clusters > 0, "alignment/metric/clusters > 0");
  require(a.metric.max_iterations > 0, "alignment/metric/max_iterations > 0");
  require(a.metric.crop_width > 0 && a.metric.crop_height > 0, "alignment/metric/crop_width and crop_height > 0");
  require(!a.metric_model.empty() || a.corpus_size >= a.metric.clusters, "alignment/corpus_size >= metric/clusters");

  require(c.prompts.high.eps > 0.0 && c.prompts.low.eps > 0.0, "prompting eps > 0");
  require(c.prompts.high.min_pts > 0 && c.prompts.low.min_pts > 0, "prompting min_pts > 0");
  require(c.prompts.max_negatives >= 0, "prompting/max_negatives >= 0");
  require(c.occlusion_tolerance > 0.0, "prompting/occlusion_tolerance > 0");

  require(c.segmenter.backend == "mock" || (c.segmenter.remote() && !c.segmenter.url().empty()),
          "segmenter/backend is 'mock' or 'remote:<url>'");
  require(c.segmenter.mock.tolerance > 0.0, "segmenter/tolerance > 0");
  require(c.segmenter.mock.max_halvings >= 0, "segmenter/max_halvings >= 0");
  require(c.segmenter.timeout_seconds > 0, "segmenter/timeout_seconds > 0");

  require(c.connectivity == 6 || c.connectivity == 18 || c.connectivity == 26, "reconstruction/connectivity in {6, 18, 26}");
  require(c.bleeding.depth_dev > 0.0, "reconstruction/bleeding/depth_dev > 0");
  require(c.bleeding.border >= 0, "reconstruction/bleeding/border >= 0");
  require(c.bleeding.max_drop >= 0.0 && c.bleeding.max_drop <= 1.0, "reconstruction/bleeding/max_drop in [0,1]");
  require(c.merge.iou > 0.0 && c.merge.iou <= 1.0, "reconstruction/merge/iou in (0,1]");
  require(c.merge.containment > 0.0 && c.merge.containment <= 1.0, "reconstruction/merge/containment in (0,1]");
  require(c.psi_threshold >= 0.0, "reconstruction/psi_threshold >= 0");
  require(c.smoothing.center_distance >= 0.0, "reconstruction/smoothing/center_distance >= 0");
  require(c.smoothing.side_ratio >= 0.0 && c.smoothing.side_ratio <= 1.0, "reconstruction/smoothing/side_ratio in [0,1]");

  require(c.ground_cell > 0.0, "ground/cell > 0");
  require(c.ground_window >= 0, "ground/window >= 0");
  require(c.ground_bins > 0, "ground/bins > 0");
  require(c.fcm.clusters > 0, "ground/clusters > 0");
  require(c.fcm.fuzzifier > 1.0, "ground/fuzzifier > 1");
  require(c.fcm.tolerance > 0.0, "ground/tolerance > 0");
  require(c.fcm.max_iterations > 0, "ground/max_iterations > 0");
}

void applyEnvironment(PipelineConfig & config)
{
  const char * url = std::getenv(kRemoteUrlEnv);
  if (url != nullptr && *url != '\0') {
    config.segmenter.backend = std::string("remote:") + url;
  }
}

}  // namespace preseg::pipeline
