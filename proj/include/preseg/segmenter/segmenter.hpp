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

#ifndef PRESEG__SEGMENTER__SEGMENTER_HPP_
#define PRESEG__SEGMENTER__SEGMENTER_HPP_

#include "preseg/alignment/image.hpp"
#include "preseg/segmenter/rle.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace preseg::segmenter
{

struct PointPrompt
{
  int x{};
  int y{};
  bool positive{true};
  bool operator==(const PointPrompt &) const = default;
};

struct SegMask
{
  std::uint32_t frame{};
  int object_id{};
  Rle rle;
  bool operator==(const SegMask &) const = default;
};

struct SessionHandle
{
  std::string id;
  std::uint32_t frame_count{};
  int width{};
  int height{};
};

/// Promptable video segmenter. Sessions are independent and may be used from
/// different threads; calls on one session must not overlap.
class Segmenter
{
public:
  virtual ~Segmenter() = default;

  /// Throws Error(kProtocol) for an empty video or mixed frame sizes.
  virtual SessionHandle openSession(std::span<const alignment::RgbImage> frames) = 0;
  /// Mask for `frame` holding every positive and no negative point. Throws
  /// Error(kProtocol) for a bad frame or an off-raster point and
  /// Error(kPromptInfeasible) when the prompts cannot be satisfied.
  virtual SegMask addPrompt(
    const SessionHandle & session, std::uint32_t frame, int object_id, std::span<const PointPrompt> points) = 0;
  /// Masks for every (frame, object) the session can track, ordered by
  /// frame then object id.
  virtual std::vector<SegMask> propagate(const SessionHandle & session) = 0;
  virtual void closeSession(const SessionHandle & session) = 0;
};

}  // namespace preseg::segmenter

#endif  // PRESEG__SEGMENTER__SEGMENTER_HPP_
