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

#include "preseg/segmenter/mock_segmenter.hpp"

#include "preseg/common/error.hpp"

#include <deque>

namespace preseg::segmenter
{

namespace
{

void checkPoints(std::span<const PointPrompt> points, int width, int height)
{
  for (const auto & p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw Error(
        ErrorCode::kProtocol, "prompt point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") is off the raster");
    }
  }
}

Bitmask fill(const alignment::RgbImage & image, const PointPrompt & seed, double tolerance)
{
  Bitmask mask(image.width, image.height);
  const std::uint8_t * s = image.at(seed.x, seed.y);
  const double limit = tolerance * 255.0;
  const double limit2 = limit * limit;
  auto similar = [&](int x, int y) {
    const std::uint8_t * c = image.at(x, y);
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double d = static_cast<double>(c[k]) - static_cast<double>(s[k]);
      d2 += d * d;
    }
    return d2 <= limit2;
  };
  std::deque<std::pair<int, int>> queue{{seed.x, seed.y}};
  mask.bits[static_cast<std::size_t>(seed.y) * image.width + seed.x] = 1;
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = x + kDx[k];
      const int ny = y + kDy[k];
      if (nx < 0 || ny < 0 || nx >= image.width || ny >= image.height) {
        continue;
      }
      auto & bit = mask.bits[static_cast<std::size_t>(ny) * image.width + nx];
      if (bit == 0 && similar(nx, ny)) {
        bit = 1;
        queue.emplace_back(nx, ny);
      }
    }
  }
  return mask;
}

}  // namespace

Bitmask floodFill(const alignment::RgbImage & image, std::span<const PointPrompt> points, const MockParams & params)
{
  checkPoints(points, image.width, image.height);
  const PointPrompt * seed = nullptr;
  for (const auto & p : points) {
    if (p.positive) {
      seed = &p;
      break;
    }
  }
  if (seed == nullptr) {
    throw Error(ErrorCode::kProtocol, "at least one positive point is required");
  }
  double tolerance = params.tolerance;
  for (int attempt = 0;; ++attempt) {
    Bitmask mask = fill(image, *seed, tolerance);
    bool absorbs_negative = false;
    bool misses_positive = false;
    for (const auto & p : points) {
      const bool in = mask.at(p.x, p.y);
      absorbs_negative = absorbs_negative || (!p.positive && in);
      misses_positive = misses_positive || (p.positive && !in);
    }
    if (!absorbs_negative && !misses_positive) {
      return mask;
    }
    if (misses_positive || attempt >= params.max_halvings) {
      throw Error(ErrorCode::kPromptInfeasible, "prompts cannot be separated by flood fill");
    }
    tolerance *= 0.5;
  }
}

SessionHandle MockSegmenter::openSession(std::span<const alignment::RgbImage> frames)
{
  if (frames.empty()) {
    throw Error(ErrorCode::kProtocol, "a session needs at least one frame");
  }
  for (const auto & f : frames) {
    if (f.width != frames.front().width || f.height != frames.front().height) {
      throw Error(ErrorCode::kProtocol, "frames have mixed dimensions");
    }
  }
  auto session = std::make_shared<Session>();
  session->frames.assign(frames.begin(), frames.end());
  SessionHandle handle{"mock-" + std::to_string(next_id_++), static_cast<std::uint32_t>(frames.size()),
                       frames.front().width, frames.front().height};
  std::lock_guard lock(mutex_);
  sessions_.emplace(handle.id, std::move(session));
  return handle;
}

std::shared_ptr<MockSegmenter::Session> MockSegmenter::find(const SessionHandle & handle) const
{
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(handle.id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown session " + handle.id);
  }
  return it->second;
}

SegMask MockSegmenter::addPrompt(
  const SessionHandle & handle, std::uint32_t frame, int object_id, std::span<const PointPrompt> points)
{
  const auto session = find(handle);
  std::lock_guard lock(session->mutex);
  if (frame >= session->frames.size()) {
    throw Error(ErrorCode::kProtocol, "frame " + std::to_string(frame) + " is out of range");
  }
  SegMask mask{frame, object_id, encodeRle(floodFill(session->frames[frame], points, params_))};
  session->masks[{frame, object_id}] = mask;
  return mask;
}

std::vector<SegMask> MockSegmenter::propagate(const SessionHandle & handle)
{
  const auto session = find(handle);
  std::lock_guard lock(session->mutex);
  std::vector<SegMask> out;
  out.reserve(session->masks.size());
  for (const auto & [key, mask] : session->masks) {
    out.push_back(mask);
  }
  return out;
}

void MockSegmenter::closeSession(const SessionHandle & handle)
{
  std::lock_guard lock(mutex_);
  if (sessions_.erase(handle.id) == 0) {
    throw Error(ErrorCode::kNotFound, "unknown session " + handle.id);
  }
}

std::size_t MockSegmenter::openSessions() const
{
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace preseg::segmenter
