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

#ifndef PRESEG__PIPELINE__SERVICE_HPP_
#define PRESEG__PIPELINE__SERVICE_HPP_

#include "preseg/data/types.hpp"
#include "preseg/pipeline/annotation_state.hpp"
#include "preseg/pipeline/config.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace preseg::pipeline
{

// Frame payload served by GET /sequences/{s}/frames/{t}, little-endian:
//
//   offset      size    field
//   0           4       magic "PSFR"
//   4           4       uint32 layout version, currently 1
//   8           4       uint32 frame index
//   12          4       uint32 point count N
//   16          8       uint64 annotation state version the labels belong to
//   24          16 N    per point float32 x, y, z, intensity (sensor frame)
//   24 + 16 N   4 N     per point uint32 label, instance << 16 | semantic
inline constexpr std::uint32_t kFramePayloadVersion = 1;

struct FramePayload
{
  std::uint32_t frame{};
  std::uint64_t version{};
  std::vector<data::Point> points;
  data::FrameLabels labels;
};

/// Throws Error(kDimensionMismatch) when points and labels differ in size.
std::vector<std::uint8_t> encodeFramePayload(const FramePayload & payload);
/// Throws Error(kMalformedFile) on a bad magic, version or length.
FramePayload decodeFramePayload(std::span<const std::uint8_t> bytes);

/// A sequence served for annotation. `output_dir` holds the presegmentation
/// (labels/, tracks.json); the service keeps journal.jsonl there and writes
/// saved labels to annotated/.
struct SequenceSource
{
  std::string name;
  std::filesystem::path manifest;
  std::filesystem::path output_dir;
};

/// HTTP annotation API:
///
///   GET  /sequences                          {"sequences": [{"name", "frames", "version"}]}
///   GET  /sequences/{s}/frames/{t}           frame payload (application/octet-stream)
///   GET  /sequences/{s}/segments             {"version", "segments": [{"id", "semantic", "instance", "frames", "points"}]}
///   POST /sequences/{s}/assign               {"segment_id", "semantic_id"}
///   POST /sequences/{s}/merge                {"ids"}
///   POST /sequences/{s}/split                {"segment_id", "frame", "point_indices"}
///   POST /sequences/{s}/auto_instance        {}
///   POST /sequences/{s}/save                 -> {"version", "frames"}
///   POST /sequences/{s}/presegment           optional config overrides -> {"job"}
///   GET  /jobs/{id}/progress                 {"job", "state", "stage", "fraction", "error"}
///
/// Mutations answer {"version", "entry"} and accept "expected_version"; a
/// stale one gets 409 with {"error": "conflict", "retry_version"}. Unknown
/// sequences, segments, frames and jobs get 404.
class AnnotationService
{
public:
  /// `config` supplies the segmenter backend and parameters of presegment jobs.
  explicit AnnotationService(PipelineConfig config = {});
  ~AnnotationService();
  AnnotationService(const AnnotationService &) = delete;
  AnnotationService & operator=(const AnnotationService &) = delete;

  /// Loads the sequence and its presegmentation (all unlabeled when there is
  /// none yet) and replays the journal found in the output directory.
  void addSequence(const SequenceSource & source);
  std::shared_ptr<AnnotationState> state(const std::string & name) const;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  int start(const std::string & host = "127.0.0.1", int port = 0);
  /// Serves on the calling thread until stop().
  void listen(const std::string & host, int port);
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace preseg::pipeline

#endif  // PRESEG__PIPELINE__SERVICE_HPP_
