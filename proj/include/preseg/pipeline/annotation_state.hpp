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

#ifndef PRESEG__PIPELINE__ANNOTATION_STATE_HPP_
#define PRESEG__PIPELINE__ANNOTATION_STATE_HPP_

#include "preseg/data/types.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

namespace preseg::pipeline
{

/// One mutation. `op` is the request as applied, including any ids the
/// state chose (the new id of a split), so replay needs no other input.
struct JournalEntry
{
  std::uint64_t version{};  // state version after this entry, counting from 1
  nlohmann::json op;
};

struct SegmentSummary
{
  std::uint32_t id{};
  std::uint16_t semantic{};
  std::uint16_t instance{};
  std::map<std::uint32_t, std::size_t> points;  // frame -> point count
};

/// Immutable view of the labels at one version. Frames are shared between
/// snapshots until a mutation touches them.
struct AnnotationSnapshot
{
  std::uint64_t version{};
  std::vector<std::shared_ptr<const std::vector<std::uint32_t>>> segments;  // per frame, per point; 0 = none
  std::map<std::uint32_t, std::uint16_t> semantic;  // segment -> class
  std::map<std::uint32_t, std::uint16_t> instance;  // segment -> instance number from auto_instance
  std::set<std::uint32_t> ids;                      // every segment present in some frame

  std::size_t frameCount() const { return segments.size(); }
  /// Semantic from the segment's class (0 when unassigned); instance from
  /// auto_instance when it numbered the segment, else the segment id.
  data::FrameLabels labels(std::uint32_t frame) const;
  data::LabelMap labels() const;
  std::vector<SegmentSummary> summaries() const;
  bool hasSegment(std::uint32_t id) const { return ids.count(id) != 0; }
};

/// Per-sequence label state driven by an append-only journal. Mutations are
/// serialized; readers take snapshots without blocking writers.
///
/// Operations (the "op" field of a journal entry):
///   assign        {segment_id, semantic_id}       class for every point of the segment
///   merge         {ids}                           union under the smallest id
///   split         {segment_id, frame, point_indices, new_id}
///                 selected points of `frame` move to new_id; later frames
///                 follow by nearest neighbor in world coordinates
///   auto_instance {}                              per class, number segments 1..n
///                                                 by first frame, ties by size descending
class AnnotationState
{
public:
  /// Segment ids come from the instance field of `presegmentation`.
  /// `world_points[f][i]` locates point i of frame f; without it a split
  /// touches only its own frame.
  explicit AnnotationState(
    const data::LabelMap & presegmentation, std::vector<std::vector<Eigen::Vector3f>> world_points = {});

  std::shared_ptr<const AnnotationSnapshot> snapshot() const;
  std::uint64_t version() const { return snapshot()->version; }
  std::vector<JournalEntry> journal() const;

  /// Validates and applies one operation and returns its journal entry.
  /// Throws Error(kConflict) when `expected_version` is set and stale,
  /// Error(kNotFound) for unknown segments and Error(kParameter) for
  /// malformed operations. A failed operation changes nothing.
  JournalEntry apply(const nlohmann::json & op, std::optional<std::uint64_t> expected_version = std::nullopt);

  JournalEntry assign(std::uint32_t segment, std::uint16_t semantic);
  JournalEntry merge(const std::vector<std::uint32_t> & ids);
  JournalEntry split(std::uint32_t segment, std::uint32_t frame, const std::vector<std::uint32_t> & points);
  JournalEntry autoInstance();

  /// Applies `journal` in order to a fresh state. Throws Error(kConflict)
  /// when the versions are not 1, 2, 3, ...
  static std::unique_ptr<AnnotationState> replay(
    const data::LabelMap & presegmentation, const std::vector<JournalEntry> & journal,
    std::vector<std::vector<Eigen::Vector3f>> world_points = {});

private:
  std::shared_ptr<AnnotationSnapshot> mutate(const AnnotationSnapshot & base, nlohmann::json & op) const;

  std::vector<std::vector<Eigen::Vector3f>> world_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const AnnotationSnapshot> current_;
  mutable std::mutex writer_mutex_;
  std::vector<JournalEntry> journal_;
};

nlohmann::json toJson(const JournalEntry & entry);
JournalEntry journalEntryFromJson(const nlohmann::json & j);

}  // namespace preseg::pipeline

#endif  // PRESEG__PIPELINE__ANNOTATION_STATE_HPP_
