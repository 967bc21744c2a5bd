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

#ifndef PRESEG__SEGMENTER__MOCK_SEGMENTER_HPP_
#define PRESEG__SEGMENTER__MOCK_SEGMENTER_HPP_

#include "preseg/segmenter/segmenter.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>

namespace preseg::segmenter
{

struct MockParams
{
  double tolerance{0.10};  // RGB distance to the seed color, channels in [0,1]
  int max_halvings{4};
};

/// 4-connected flood fill from the first positive point over pixels whose
/// color lies within `tolerance` of the seed color. When a negative point is
/// swallowed the tolerance is halved, up to `max_halvings` times.
Bitmask floodFill(const alignment::RgbImage & image, std::span<const PointPrompt> points, const MockParams & params);

/// Deterministic stand-in for a video foundation model: every prompted
/// (frame, object) gets its own flood fill, and propagate() returns those
/// masks. It does no temporal tracking of its own.
class MockSegmenter : public Segmenter
{
public:
  explicit MockSegmenter(MockParams params = {}) : params_(params) {}

  SessionHandle openSession(std::span<const alignment::RgbImage> frames) override;
  SegMask addPrompt(
    const SessionHandle & session, std::uint32_t frame, int object_id, std::span<const PointPrompt> points) override;
  std::vector<SegMask> propagate(const SessionHandle & session) override;
  void closeSession(const SessionHandle & session) override;

  std::size_t openSessions() const;

private:
  struct Session
  {
    std::vector<alignment::RgbImage> frames;
    std::map<std::pair<std::uint32_t, int>, SegMask> masks;
    std::mutex mutex;
  };

  std::shared_ptr<Session> find(const SessionHandle & session) const;

  MockParams params_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_id_{1};
};

}  // namespace preseg::segmenter

#endif  // PRESEG__SEGMENTER__MOCK_SEGMENTER_HPP_
