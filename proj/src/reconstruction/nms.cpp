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

#include "preseg/reconstruction/nms.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace preseg::reconstruction
{

double Box::volume() const
{
  if (empty()) {
    return 0.0;
  }
  return (hi - lo).prod();
}

Box Box::merged(const Box & other) const
{
  if (empty()) {
    return other;
  }
  if (other.empty()) {
    return *this;
  }
  return {lo.cwiseMin(other.lo), hi.cwiseMax(other.hi)};
}

Box Box::intersection(const Box & other) const
{
  return {lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
}

Box voxelBox(const VoxelSet & voxels, const aggregation::VoxelGrid & grid)
{
  Box box;
  for (auto v : voxels) {
    box = box.merged({grid.corner(v, 0), grid.corner(v, 7)});
  }
  return box;
}

double boxIoU(const Box & a, const Box & b)
{
  const double inter = a.intersection(b).volume();
  const double uni = a.volume() + b.volume() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double boxContainment(const Box & a, const Box & b)
{
  const double smaller = std::min(a.volume(), b.volume());
  return smaller > 0.0 ? a.intersection(b).volume() / smaller : 0.0;
}

bool equivalent(const Box & a, const Box & b, const MergeRule & rule)
{
  return boxIoU(a, b) >= rule.iou || boxContainment(a, b) >= rule.containment;
}

namespace
{

VoxelSet unite(const VoxelSet & a, const VoxelSet & b)
{
  VoxelSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct Cluster
{
  Candidate c;
  Box box;
};

void sortBySize(std::vector<Cluster> & v)
{
  std::stable_sort(v.begin(), v.end(), [](const Cluster & a, const Cluster & b) {
    return std::make_tuple(-static_cast<std::int64_t>(a.c.voxels.size()), a.c.id) <
           std::make_tuple(-static_cast<std::int64_t>(b.c.voxels.size()), b.c.id);
  });
}

}  // namespace

Nms3dResult nms3d(std::vector<Candidate> candidates, const aggregation::VoxelGrid & grid, const MergeRule & rule)
{
  std::vector<Cluster> pending;
  for (auto & c : candidates) {
    if (c.voxels.empty()) {
      continue;
    }
    Box b = voxelBox(c.voxels, grid);
    pending.push_back({std::move(c), b});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    sortBySize(pending);
    std::vector<Cluster> kept;
    for (auto & c : pending) {
      auto it = std::find_if(kept.begin(), kept.end(), [&](const Cluster & k) { return equivalent(k.box, c.box, rule); });
      if (it == kept.end()) {
        kept.push_back(std::move(c));
        continue;
      }
      it->c.voxels = unite(it->c.voxels, c.c.voxels);
      it->box = it->box.merged(c.box);
      changed = true;
    }
    pending = std::move(kept);
  }
  sortBySize(pending);

  Nms3dResult out;
  out.labels.assign(grid.size(), kUnlabeled);
  // Smallest first so the largest cluster writes last and wins.
  for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
    for (auto v : it->c.voxels) {
      out.labels[v] = it->c.id;
    }
  }
  for (auto & c : pending) {
    out.kept.push_back(std::move(c.c));
  }
  return out;
}

void labelGrowth(std::vector<int> & labels, const aggregation::VoxelGrid & grid, int max_rounds)
{
  std::vector<aggregation::VoxelKey> offsets;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx != 0 || dy != 0 || dz != 0) {
          offsets.emplace_back(dx, dy, dz);
        }
      }
    }
  }
  std::vector<aggregation::VoxelId> frontier;
  for (aggregation::VoxelId v = 0; v < labels.size(); ++v) {
    if (labels[v] == kUnlabeled) {
      frontier.push_back(v);
    }
  }
  for (int round = 0; max_rounds < 0 || round < max_rounds; ++round) {
    std::vector<std::pair<aggregation::VoxelId, int>> updates;
    std::vector<aggregation::VoxelId> still;
    for (auto v : frontier) {
      std::map<int, int> votes;
      for (const auto & o : offsets) {
        const auto n = grid.find(grid[v].key + o);
        if (n && labels[*n] != kUnlabeled) {
          ++votes[labels[*n]];
        }
      }
      if (votes.empty()) {
        still.push_back(v);
        continue;
      }
      // std::map iterates ids ascending, so strict > keeps the smallest on ties.
      auto best = votes.begin();
      for (auto it = votes.begin(); it != votes.end(); ++it) {
        if (it->second > best->second) {
          best = it;
        }
      }
      updates.emplace_back(v, best->first);
    }
    if (updates.empty()) {
      break;
    }
    for (const auto & [v, l] : updates) {
      labels[v] = l;
    }
    frontier = std::move(still);
  }
}

std::size_t ObjectTrack::voxelCount() const
{
  std::size_t n = 0;
  for (const auto & [f, tf] : frames) {
    n += tf.voxels.size();
  }
  return n;
}

void addToTrack(ObjectTrack & track, std::uint32_t frame, const VoxelSet & voxels, const aggregation::VoxelGrid & grid)
{
  if (voxels.empty()) {
    return;
  }
  TrackFrame & tf = track.frames[frame];
  tf.voxels = unite(tf.voxels, voxels);
  tf.box = tf.box.merged(voxelBox(voxels, grid));
}

std::optional<double> temporalEquivalence(const ObjectTrack & a, const ObjectTrack & b, const MergeRule & rule)
{
  if (a.frames.empty() || b.frames.empty()) {
    return std::nullopt;
  }
  const double span = static_cast<double>(std::min(a.lastFrame(), b.lastFrame())) -
                      static_cast<double>(std::max(a.firstFrame(), b.firstFrame()));
  if (span <= 0.0) {
    return std::nullopt;
  }
  // Frames present in only one track cannot satisfy the condition, so the
  // union reduces to the shared frames.
  int count = 0;
  for (const auto & [f, fa] : a.frames) {
    const auto it = b.frames.find(f);
    if (it != b.frames.end() && equivalent(fa.box, it->second.box, rule)) {
      ++count;
    }
  }
  return count / span;
}

namespace
{

ObjectTrack mergeTracks(ObjectTrack into, const ObjectTrack & from)
{
  for (const auto & [f, tf] : from.frames) {
    TrackFrame & dst = into.frames[f];
    dst.voxels = unite(dst.voxels, tf.voxels);
    dst.box = dst.box.merged(tf.box);
  }
  return into;
}

void sortTracks(std::vector<ObjectTrack> & tracks)
{
  std::stable_sort(tracks.begin(), tracks.end(), [](const ObjectTrack & a, const ObjectTrack & b) {
    return std::make_tuple(-static_cast<std::int64_t>(a.voxelCount()), a.id) <
           std::make_tuple(-static_cast<std::int64_t>(b.voxelCount()), b.id);
  });
}

}  // namespace

Nms4dResult nms4d(std::vector<ObjectTrack> tracks, double threshold, const MergeRule & rule)
{
  Nms4dResult out;
  tracks.erase(
    std::remove_if(tracks.begin(), tracks.end(), [](const ObjectTrack & t) { return t.frames.empty(); }), tracks.end());
  for (const auto & t : tracks) {
    out.remap[t.id] = t.id;
  }
  // Psi of untouched pairs does not change, so it is computed once per pair.
  std::map<std::pair<int, int>, std::optional<double>> cache;
  auto psi = [&](const ObjectTrack & a, const ObjectTrack & b) {
    const auto key = std::minmax(a.id, b.id);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, temporalEquivalence(a, b, rule)).first;
      out.decisions.push_back({a.id, b.id, it->second, false});
    }
    return it->second;
  };

  for (;;) {
    sortTracks(tracks);
    bool merged = false;
    for (std::size_t i = 0; i < tracks.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < tracks.size() && !merged; ++j) {
        const auto p = psi(tracks[i], tracks[j]);
        if (!p || *p < threshold) {
          continue;
        }
        const int keep = tracks[i].id;
        const int gone = tracks[j].id;
        out.decisions.push_back({keep, gone, p, true});
        tracks[i] = mergeTracks(std::move(tracks[i]), tracks[j]);
        tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(j));
        for (auto & [from, to] : out.remap) {
          if (to == gone) {
            to = keep;
          }
        }
        for (auto it = cache.begin(); it != cache.end();) {
          it = (it->first.first == keep || it->first.second == keep || it->first.first == gone ||
                it->first.second == gone)
                 ? cache.erase(it)
                 : std::next(it);
        }
        merged = true;
      }
    }
    if (!merged) {
      break;
    }
  }
  out.tracks = std::move(tracks);
  return out;
}

}  // namespace preseg::reconstruction
