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

#ifndef PRESEG__SEGMENTER__REMOTE_SEGMENTER_HPP_
#define PRESEG__SEGMENTER__REMOTE_SEGMENTER_HPP_

#include "preseg/segmenter/segmenter.hpp"

#include <string>

namespace preseg::segmenter
{

/// Client for a segmenter served over the HTTP protocol in wire.hpp.
/// `base_url` looks like "http://host:port". Every call opens its own
/// connection, so one instance can drive several sessions in parallel.
class RemoteSegmenter : public Segmenter
{
public:
  explicit RemoteSegmenter(std::string base_url, int timeout_seconds = 300);

  SessionHandle openSession(std::span<const alignment::RgbImage> frames) override;
  SegMask addPrompt(
    const SessionHandle & session, std::uint32_t frame, int object_id, std::span<const PointPrompt> points) override;
  std::vector<SegMask> propagate(const SessionHandle & session) override;
  void closeSession(const SessionHandle & session) override;

  const std::string & baseUrl() const { return base_url_; }

private:
  std::string base_url_;
  int timeout_seconds_;
};

}  // namespace preseg::segmenter

#endif  // PRESEG__SEGMENTER__REMOTE_SEGMENTER_HPP_
