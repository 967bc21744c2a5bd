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

#include "preseg/pipeline/presegment.hpp"

#include "preseg/aggregation/ground_split.hpp"
#include "preseg/aggregation/keyframes.hpp"
#include "preseg/aggregation/superframe.hpp"
#include "preseg/alignment/dead_leaves.hpp"
#include "preseg/alignment/pseudo_color.hpp"
#include "preseg/alignment/renderer.hpp"
#include "preseg/alignment/rig_optimizer.hpp"
#include "preseg/common/error.hpp"
#include "preseg/common/parallel.hpp"
#include "preseg/data/io.hpp"
#include "preseg/ground/ground_labeler.hpp"
#include "preseg/prompting/prompts.hpp"
#include "preseg/reconstruction/lift.hpp"
#include "preseg/reconstruction/smoothing.hpp"
#include "preseg/segmenter/mock_segmenter.hpp"
#include "preseg/segmenter/remote_segmenter.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>

namespace preseg::pipeline
{

namespace fs = std::filesystem;

namespace
{

class Progress
{
public:
  explicit Progress(const ProgressSink & sink) : sink_(sink) {}

  void report(const std::string & stage, double fraction, const std::string & message = {})
  {
    last_ = std::max(last_, fraction);
    if (sink_) {
      sink_({stage, last_, message});
    }
  }

private:
  const ProgressSink & sink_;
  double last_{0.0};
};

template <typename Fn>
auto inStage(const char * stage, Fn && fn) -> decltype(fn())
{
  try {
    return fn();
  } catch (const StageError &) {
    throw;
  } catch (const Error & e) {
    throw StageError(stage, e.code(), e.detail());
  } catch (const std::exception & e) {
    throw StageError(stage, ErrorCode::kIo, e.what());
  }
}

// What later stages need from one frame's superframe.
struct FrameData
{
  aggregation::VoxelGrid grid;
  std::vector<double> hues;
  std::vector<std::int32_t> point_voxel;  // per scan point, -1 when not voxelized
  std::vector<std::uint32_t> ground;      // scan point indices
};

FrameData aggregateFrame(const Sequence & sequence, const PipelineConfig & config, std::uint32_t f)
{
  const auto sf = aggregation::buildSuperframe(sequence.frames, sequence.poses, f, config.superframe_half_width);
  const auto split = aggregation::splitGround(sf, config.ground_split);
  FrameData d;
  d.grid = aggregation::voxelize(sf, split.object, config.voxel_edge);
  d.point_voxel.assign(sequence.frames[f].points.size(), -1);
  for (std::uint32_t i = 0; i < sf.size(); ++i) {
    if (sf.points[i].frame != f) {
      continue;
    }
    if (const auto v = d.grid.voxelOfPoint(i)) {
      d.point_voxel[sf.points[i].index] = static_cast<std::int32_t>(*v);
    }
  }
  for (const auto i : split.ground) {
    if (sf.points[i].frame == f) {
      d.ground.push_back(sf.points[i].index);
    }
  }
  std::sort(d.ground.begin(), d.ground.end());
  d.hues = alignment::voxelHues(d.grid);
  return d;
}

std::vector<std::uint32_t> keyframeIndices(const Sequence & sequence, const PipelineConfig & config)
{
  std::vector<std::uint32_t> out;
  for (const auto & k : aggregation::designateKeyframes(sequence.poses, config.keyframes)) {
    out.push_back(k.frame_index);
  }
  return out;
}

void checkSequence(const Sequence & sequence)
{
  if (sequence.frames.empty()) {
    throw Error(ErrorCode::kMalformedFile, "sequence has no frames");
  }
  if (sequence.frames.size() != sequence.poses.size()) {
    throw Error(ErrorCode::kMalformedFile, "sequence has " + std::to_string(sequence.frames.size()) + " scans but " +
                                             std::to_string(sequence.poses.size()) + " poses");
  }
}

// Voxels one segmenter mask lifts to in one frame.
struct Piece
{
  int object_id{};
  std::uint32_t frame{};
  reconstruction::VoxelSet voxels;
};

// One segmenter session: camera k over the frames [first, last].
std::vector<Piece> segmentNeighborhood(
  const Sequence & sequence, const PipelineConfig & config, const std::vector<FrameData> & data,
  const alignment::Camera & camera, int k, std::uint32_t first, std::uint32_t last,
  std::vector<prompting::PromptSet> prompts, segmenter::Segmenter & seg)
{
  std::vector<alignment::PseudoImage> images;
  std::vector<alignment::RgbImage> rgb;
  for (std::uint32_t f = first; f <= last; ++f) {
    images.push_back(alignment::renderPseudoImage(data[f].grid, data[f].hues, camera, config.alignment.color));
    rgb.push_back(std::move(images.back().rgb));
  }
  std::vector<prompting::FrameView> views;
  for (std::uint32_t f = first; f <= last; ++f) {
    views.push_back({f, k, &camera, &images[f - first].map});
  }

  const auto session = seg.openSession(rgb);
  std::vector<segmenter::SegMask> masks;
  try {
    for (auto & p : prompts) {
      prompting::propagatePrompts(p, sequence.poses, views, config.occlusion_tolerance);
      std::map<std::uint32_t, std::vector<segmenter::PointPrompt>> per_frame;
      for (const auto & px : p.pixels) {
        per_frame[px.frame].push_back({px.x, px.y, px.positive});
      }
      for (auto & [f, points] : per_frame) {
        // The first positive seeds the mask.
        std::stable_partition(points.begin(), points.end(), [](const auto & q) { return q.positive; });
        if (!points.front().positive) {
          continue;
        }
        try {
          seg.addPrompt(session, f - first, p.object_id, points);
        } catch (const Error & e) {
          if (e.code() != ErrorCode::kPromptInfeasible) {
            throw;
          }
        }
      }
    }
    masks = seg.propagate(session);
  } catch (...) {
    seg.closeSession(session);
    throw;
  }
  seg.closeSession(session);

  std::vector<Piece> pieces;
  for (const auto & mask : masks) {
    const std::uint32_t f = first + mask.frame;
    if (f > last) {
      throw Error(ErrorCode::kProtocol, "segmenter returned a mask for frame " + std::to_string(mask.frame) +
                                          " of a " + std::to_string(last - first + 1) + "-frame session");
    }
    const auto bits = segmenter::decodeRle(mask.rle);
    const auto & map = images[f - first].map;
    const auto components =
      reconstruction::regionGrowth(reconstruction::unprojectMask(bits, map), data[f].grid, config.connectivity);
    if (components.empty()) {
      continue;
    }
    const auto * largest = &components.front();
    for (const auto & c : components) {
      if (c.size() > largest->size()) {
        largest = &c;
      }
    }
    auto voxels = reconstruction::reduceBleeding(*largest, bits, map, config.bleeding);
    if (!voxels.empty()) {
      pieces.push_back({mask.object_id, f, std::move(voxels)});
    }
  }
  return pieces;
}

std::string frameName(std::size_t f)
{
  char name[32];
  std::snprintf(name, sizeof(name), "%06zu", f);
  return name;
}

}  // namespace

Sequence loadSequence(const fs::path & manifest_path)
{
  const auto manifest = data::readManifest(manifest_path);
  Sequence s;
  for (std::size_t i = 0; i < manifest.frame_paths.size(); ++i) {
    s.frames.push_back(data::readPointFrame(manifest.frame_paths[i], static_cast<std::uint32_t>(i)));
  }
  s.poses = data::readPoseFile(manifest.pose_path);
  checkSequence(s);
  return s;
}

alignment::MetricModel loadOrFitMetricModel(const AlignmentConfig & config, std::uint64_t seed)
{
  if (!config.metric_model.empty()) {
    return alignment::loadMetricModel(config.metric_model);
  }
  const auto corpus =
    alignment::deadLeavesCorpus(config.corpus_size, config.metric.crop_width, config.metric.crop_height, seed);
  auto params = config.metric;
  params.seed = seed;
  return alignment::fitMetricModel(corpus, params);
}

alignment::PseudoCameraRig configuredRig(const AlignmentConfig & config)
{
  auto rig = config.rig;
  rig.intrinsics = alignment::Intrinsics::forResolution(rig.intrinsics.width, rig.intrinsics.height, config.focal);
  return rig;
}

std::vector<aggregation::VoxelGrid> keyframeGrids(
  const Sequence & sequence, const PipelineConfig & config, std::vector<std::uint32_t> * keyframes)
{
  checkSequence(sequence);
  const auto kf = keyframeIndices(sequence, config);
  std::vector<aggregation::VoxelGrid> grids(kf.size());
  parallelFor(kf.size(), [&](std::size_t i) { grids[i] = aggregateFrame(sequence, config, kf[i]).grid; });
  if (keyframes != nullptr) {
    *keyframes = kf;
  }
  return grids;
}

std::unique_ptr<segmenter::Segmenter> makeSegmenter(const SegmenterConfig & config)
{
  if (config.remote()) {
    return std::make_unique<segmenter::RemoteSegmenter>(config.url(), config.timeout_seconds);
  }
  return std::make_unique<segmenter::MockSegmenter>(config.mock);
}

PresegmentResult presegment(
  const Sequence & sequence, const PipelineConfig & config, segmenter::Segmenter & seg, const ProgressSink & sink)
{
  inStage("config", [&] { validate(config); });
  inStage("ingest", [&] { checkSequence(sequence); });
  Progress progress(sink);
  PresegmentResult result;
  const auto n = static_cast<std::uint32_t>(sequence.frames.size());

  std::vector<FrameData> data(n);
  inStage("aggregation", [&] {
    parallelFor(n, [&](std::size_t f) { data[f] = aggregateFrame(sequence, config, static_cast<std::uint32_t>(f)); });
    result.keyframes = keyframeIndices(sequence, config);
  });
  const auto & kf = result.keyframes;
  progress.report("aggregation", 0.2, std::to_string(n) + " superframes, " + std::to_string(kf.size()) + " keyframes");

  inStage("alignment", [&] {
    auto rig = configuredRig(config.alignment);
    const Eigen::Vector3d motion = aggregation::relativePose(sequence.poses, n - 1, 0).translation();
    rig.primary = alignment::selectPrimaryCamera(rig, motion);
    const auto model = loadOrFitMetricModel(config.alignment, config.seed);
    std::vector<aggregation::VoxelGrid> grids;
    for (const auto f : kf) {
      grids.push_back(data[f].grid);
    }
    if (config.alignment.optimize_rig) {
      rig = alignment::optimizeRig(grids, model, rig, config.alignment.search, config.alignment.color);
    }
    result.rig_distance = alignment::meanDomainDistance(grids, model, rig.primaryCamera(), config.alignment.color);
    result.rig = rig;
  });
  progress.report("alignment", 0.35, "rig t=" + std::to_string(result.rig.t) + " alpha=" + std::to_string(result.rig.alpha));

  std::vector<std::vector<prompting::PromptSet>> prompts(kf.size());
  inStage("prompting", [&] {
    int next_id = 1;
    for (std::size_t i = 0; i < kf.size(); ++i) {
      std::vector<Eigen::Vector3d> centers;
      for (const auto & v : data[kf[i]].grid.voxels()) {
        centers.push_back(v.center);
      }
      prompts[i] = prompting::bilevelPrompts(centers, kf[i], config.prompts, next_id);
      next_id += static_cast<int>(prompts[i].size());
    }
  });
  progress.report("prompting", 0.4);

  std::map<int, reconstruction::ObjectTrack> tracks;
  inStage("segmentation", [&] {
    const int cameras = result.rig.cameraCount();
    for (int k = 0; k < cameras; ++k) {
      const auto camera = result.rig.camera(k);
      std::vector<std::vector<Piece>> pieces(kf.size());
      parallelFor(kf.size(), [&](std::size_t i) {
        if (prompts[i].empty()) {
          return;
        }
        const std::uint32_t first = i == 0 ? 0 : kf[i - 1];
        const std::uint32_t last = i + 1 < kf.size() ? kf[i + 1] : n - 1;
        pieces[i] = segmentNeighborhood(sequence, config, data, camera, k, first, last, prompts[i], seg);
      });
      for (const auto & list : pieces) {
        for (const auto & p : list) {
          auto & track = tracks[p.object_id];
          track.id = p.object_id;
          reconstruction::addToTrack(track, p.frame, p.voxels, data[p.frame].grid);
        }
      }
      progress.report("segmentation", 0.4 + 0.4 * (k + 1) / cameras, "camera " + std::to_string(k));
    }
  });

  std::vector<std::vector<int>> instance(n);
  inStage("reconstruction", [&] {
    std::vector<reconstruction::ObjectTrack> list;
    for (auto & [id, t] : tracks) {
      list.push_back(std::move(t));
    }
    if (config.enable_nms4d) {
      auto merged = reconstruction::nms4d(std::move(list), config.psi_threshold, config.merge);
      list = std::move(merged.tracks);
      result.merges = std::move(merged.decisions);
    }
    parallelFor(n, [&](std::size_t f) {
      std::vector<reconstruction::Candidate> candidates;
      for (const auto & t : list) {
        if (const auto it = t.frames.find(static_cast<std::uint32_t>(f)); it != t.frames.end()) {
          candidates.push_back({t.id, it->second.voxels});
        }
      }
      const auto & grid = data[f].grid;
      auto labels = reconstruction::nms3d(std::move(candidates), grid, config.merge).labels;
      reconstruction::labelGrowth(labels, grid, config.label_growth_rounds);
      auto & out = instance[f];
      out.assign(data[f].point_voxel.size(), 0);
      for (std::size_t p = 0; p < out.size(); ++p) {
        const auto v = data[f].point_voxel[p];
        if (v >= 0 && labels[static_cast<std::size_t>(v)] != reconstruction::kUnlabeled) {
          out[p] = labels[static_cast<std::size_t>(v)];
        }
      }
    });
    if (config.enable_smoothing) {
      std::vector<reconstruction::LabeledScan> scans(n);
      for (std::uint32_t f = 0; f < n; ++f) {
        const auto & pose = sequence.poses[f];
        for (const auto & p : sequence.frames[f].points) {
          scans[f].points.push_back(pose.apply(p.position()));
        }
        scans[f].labels = instance[f];
      }
      const auto remap = reconstruction::interframeSmoothing(scans, config.smoothing);
      for (auto & labels : instance) {
        reconstruction::applyRemap(labels, remap);
      }
    }
  });
  progress.report("reconstruction", 0.9);

  std::vector<std::vector<int>> ground_segment(n);
  inStage("ground", [&] {
    std::vector<ground::GroundPoint> points;
    for (std::uint32_t f = 0; f < n; ++f) {
      ground_segment[f].assign(sequence.frames[f].points.size(), -1);
      for (const auto i : data[f].ground) {
        const auto & p = sequence.frames[f].points[i];
        points.push_back({Eigen::Vector3f(p.x, p.y, p.z), p.intensity, f, i});
      }
    }
    if (points.empty()) {
      return;
    }
    const auto grid = ground::rasterizeGround(points, sequence.poses, config.ground_cell);
    const auto features = ground::cellFeatures(grid, config.ground_window, config.ground_bins);
    auto fcm = config.fcm;
    fcm.clusters = std::min<int>(fcm.clusters, static_cast<int>(features.size()));
    fcm.seed = config.seed;
    const auto partition = ground::fuzzyCmeans(features, fcm);
    for (std::size_t i = 0; i < points.size(); ++i) {
      ground_segment[points[i].frame][points[i].index] = partition.labels[grid.cell_of_point[i]];
    }
  });
  progress.report("ground", 0.97);

  inStage("labels", [&] {
    std::set<int> object_ids;
    std::set<int> ground_ids;
    for (std::uint32_t f = 0; f < n; ++f) {
      for (const auto id : instance[f]) {
        if (id != 0) {
          object_ids.insert(id);
        }
      }
      for (const auto g : ground_segment[f]) {
        if (g >= 0) {
          ground_ids.insert(g);
        }
      }
    }
    if (object_ids.size() + ground_ids.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorCode::kRange, "more segments than 16-bit instance ids");
    }
    std::map<int, std::uint16_t> object_to;
    std::map<int, std::uint16_t> ground_to;
    std::uint16_t next = 1;
    for (const auto id : object_ids) {
      object_to[id] = next;
      result.tracks.push_back({next++, false, {}});
    }
    for (const auto g : ground_ids) {
      ground_to[g] = next;
      result.tracks.push_back({next++, true, {}});
    }
    result.labels.resize(n);
    for (std::uint32_t f = 0; f < n; ++f) {
      auto & out = result.labels[f];
      out.assign(instance[f].size(), data::Label{});
      for (std::size_t p = 0; p < out.size(); ++p) {
        std::uint16_t id = 0;
        if (instance[f][p] != 0) {
          id = object_to.at(instance[f][p]);
        } else if (ground_segment[f][p] >= 0) {
          id = ground_to.at(ground_segment[f][p]);
        }
        if (id != 0) {
          out[p].instance = id;
          ++result.tracks[id - 1u].points[f];
        }
      }
    }
  });
  progress.report("labels", 1.0, std::to_string(result.tracks.size()) + " segments");
  return result;
}

nlohmann::json trackManifestJson(const std::vector<TrackEntry> & tracks)
{
  auto list = nlohmann::json::array();
  for (const auto & t : tracks) {
    nlohmann::json frames = nlohmann::json::array();
    nlohmann::json counts = nlohmann::json::array();
    for (const auto & [f, c] : t.points) {
      frames.push_back(f);
      counts.push_back(c);
    }
    list.push_back({{"id", t.id}, {"kind", t.ground ? "ground" : "object"}, {"frames", frames}, {"points", counts}});
  }
  return {{"tracks", list}};
}

std::vector<TrackEntry> trackManifestFromJson(const nlohmann::json & j)
{
  std::vector<TrackEntry> out;
  try {
    for (const auto & t : j.at("tracks")) {
      TrackEntry e;
      e.id = t.at("id").get<std::uint16_t>();
      e.ground = t.at("kind").get<std::string>() == "ground";
      const auto & frames = t.at("frames");
      const auto & counts = t.at("points");
      if (frames.size() != counts.size()) {
        throw Error(ErrorCode::kParse, "track " + std::to_string(e.id) + ": frames and points differ in length");
      }
      for (std::size_t i = 0; i < frames.size(); ++i) {
        e.points[frames[i].get<std::uint32_t>()] = counts[i].get<std::size_t>();
      }
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("track manifest: ") + e.what());
  }
  return out;
}

void writeResult(const PresegmentResult & result, const fs::path & dir)
{
  const auto target = fs::absolute(dir);
  const auto staging = target.parent_path() / (target.filename().string() + ".staging");
  try {
    fs::remove_all(staging);
    fs::create_directories(staging / "labels");
    for (std::size_t f = 0; f < result.labels.size(); ++f) {
      data::writeLabelFile(result.labels[f], staging / "labels" / (frameName(f) + ".label"));
    }
    data::writeFileAtomic(staging / "tracks.json", trackManifestJson(result.tracks).dump(1));
    const nlohmann::json rig = {
      {"t", result.rig.t},
      {"alpha", result.rig.alpha},
      {"primary", result.rig.primary},
      {"yaw_offsets", result.rig.yaw_offsets},
      {"domain_distance", result.rig_distance},
      {"keyframes", result.keyframes},
    };
    data::writeFileAtomic(staging / "rig.json", rig.dump(1));
    fs::create_directories(target);
    fs::remove_all(target / "labels");
    for (const auto * name : {"labels", "tracks.json", "rig.json"}) {
      fs::rename(staging / name, target / name);
    }
    fs::remove_all(staging);
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw;
  }
}

PresegmentResult runPresegment(const PipelineConfig & config, const ProgressSink & progress)
{
  const auto sequence = inStage("ingest", [&] { return loadSequence(config.manifest); });
  const auto seg = makeSegmenter(config.segmenter);
  auto result = presegment(sequence, config, *seg, progress);
  inStage("write", [&] { writeResult(result, config.output_dir); });
  return result;
}

}  // namespace preseg::pipeline
