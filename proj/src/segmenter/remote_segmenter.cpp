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

#include "preseg/segmenter/remote_segmenter.hpp"

#include "preseg/segmenter/wire.hpp"

#include <httplib.h>

namespace preseg::segmenter
{

namespace
{

nlohmann::json call(
  const std::string & base, int timeout, const std::string & method, const std::string & path,
  const nlohmann::json * body)
{
  httplib::Client client(base);
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);
  client.set_write_timeout(timeout, 0);
  httplib::Result res;
  if (method == "POST") {
    res = client.Post(path, body != nullptr ? body->dump() : std::string("{}"), "application/json");
  } else {
    res = client.Delete(path);
  }
  if (!res) {
    throw Error(ErrorCode::kProtocol, method + " " + base + path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status / 100 != 2) {
    wire::throwFromErrorBody(res->status, res->body);
  }
  try {
    return res->body.empty() ? nlohmann::json::object() : nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed response: ") + e.what());
  }
}

}  // namespace

RemoteSegmenter::RemoteSegmenter(std::string base_url, int timeout_seconds)
: base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds)
{
  while (!base_url_.empty() && base_url_.back() == '/') {
    base_url_.pop_back();
  }
}

SessionHandle RemoteSegmenter::openSession(std::span<const alignment::RgbImage> frames)
{
  nlohmann::json body;
  body["frames"] = nlohmann::json::array();
  for (const auto & f : frames) {
    body["frames"].push_back(wire::base64Encode(alignment::encodePng(f)));
  }
  const auto j = call(base_url_, timeout_seconds_, "POST", "/session", &body);
  try {
    // Servers only have to return the id; the rest is known locally.
    const int w = frames.empty() ? 0 : frames.front().width;
    const int h = frames.empty() ? 0 : frames.front().height;
    return {j.at("session_id").get<std::string>(),
            j.value("frame_count", static_cast<std::uint32_t>(frames.size())), j.value("width", w),
            j.value("height", h)};
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed session response: ") + e.what());
  }
}

SegMask RemoteSegmenter::addPrompt(
  const SessionHandle & session, std::uint32_t frame, int object_id, std::span<const PointPrompt> points)
{
  nlohmann::json body{{"frame", frame}, {"object_id", object_id}, {"points", nlohmann::json::array()}};
  for (const auto & p : points) {
    body["points"].push_back(wire::toJson(p));
  }
  const auto j = call(base_url_, timeout_seconds_, "POST", "/session/" + session.id + "/prompts", &body);
  try {
    return {frame, object_id, wire::rleFromJson(j.at("mask"))};
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed prompt response: ") + e.what());
  }
}

std::vector<SegMask> RemoteSegmenter::propagate(const SessionHandle & session)
{
  const auto j = call(base_url_, timeout_seconds_, "POST", "/session/" + session.id + "/propagate", nullptr);
  std::vector<SegMask> out;
  try {
    for (const auto & m : j.at("masks")) {
      out.push_back(wire::maskFromJson(m));
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kProtocol, std::string("malformed propagate response: ") + e.what());
  }
  return out;
}

void RemoteSegmenter::closeSession(const SessionHandle & session)
{
  call(base_url_, timeout_seconds_, "DELETE", "/session/" + session.id, nullptr);
}

}  // namespace preseg::segmenter
