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

#include "preseg/segmenter/protocol_server.hpp"

#include "preseg/segmenter/wire.hpp"

#include <httplib.h>

#include <map>
#include <mutex>
#include <thread>

namespace preseg::segmenter
{

struct ProtocolServer::Impl
{
  explicit Impl(Segmenter & b) : backend(b) { routes(); }

  Segmenter & backend;
  httplib::Server server;
  std::thread thread;
  std::mutex mutex;
  std::map<std::string, SessionHandle> sessions;

  SessionHandle session(const std::string & id)
  {
    std::lock_guard lock(mutex);
    const auto it = sessions.find(id);
    if (it == sessions.end()) {
      throw Error(ErrorCode::kNotFound, "unknown session " + id);
    }
    return it->second;
  }

  template <typename Fn>
  static void guarded(httplib::Response & res, Fn && fn)
  {
    try {
      res.set_content(fn().dump(), "application/json");
    } catch (const Error & e) {
      res.status = wire::httpStatus(e.code());
      res.set_content(wire::errorBody(e.code(), e.detail()).dump(), "application/json");
    } catch (const nlohmann::json::exception & e) {
      res.status = 400;
      res.set_content(wire::errorBody(ErrorCode::kProtocol, e.what()).dump(), "application/json");
    }
  }

  void routes()
  {
    server.Post("/session", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const auto body = nlohmann::json::parse(req.body);
        std::vector<alignment::RgbImage> frames;
        for (const auto & f : body.at("frames")) {
          const auto png = wire::base64Decode(f.get<std::string>());
          try {
            frames.push_back(alignment::decodePng(png));
          } catch (const Error & e) {
            throw Error(ErrorCode::kProtocol, "frame is not a PNG: " + e.detail());
          }
        }
        const SessionHandle h = backend.openSession(frames);
        {
          std::lock_guard lock(mutex);
          sessions[h.id] = h;
        }
        return nlohmann::json{
          {"session_id", h.id}, {"frame_count", h.frame_count}, {"width", h.width}, {"height", h.height}};
      });
    });
    server.Post(R"(/session/([^/]+)/prompts)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const SessionHandle h = session(req.matches[1]);
        const auto body = nlohmann::json::parse(req.body);
        std::vector<PointPrompt> points;
        for (const auto & p : body.at("points")) {
          points.push_back(wire::pointFromJson(p));
        }
        const auto frame = body.at("frame").get<std::int64_t>();
        if (frame < 0) {
          throw Error(ErrorCode::kProtocol, "negative frame index");
        }
        const SegMask m =
          backend.addPrompt(h, static_cast<std::uint32_t>(frame), body.at("object_id").get<int>(), points);
        return nlohmann::json{{"mask", wire::toJson(m.rle)}};
      });
    });
    server.Post(R"(/session/([^/]+)/propagate)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const SessionHandle h = session(req.matches[1]);
        nlohmann::json masks = nlohmann::json::array();
        for (const auto & m : backend.propagate(h)) {
          masks.push_back(wire::toJson(m));
        }
        return nlohmann::json{{"masks", masks}};
      });
    });
    server.Delete(R"(/session/([^/]+))", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const SessionHandle h = session(req.matches[1]);
        backend.closeSession(h);
        std::lock_guard lock(mutex);
        sessions.erase(h.id);
        return nlohmann::json::object();
      });
    });
  }
};

ProtocolServer::ProtocolServer(Segmenter & backend) : impl_(std::make_unique<Impl>(backend)) {}

ProtocolServer::~ProtocolServer()
{
  stop();
}

int ProtocolServer::start(const std::string & host, int port)
{
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ProtocolServer::listen(const std::string & host, int port)
{
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ProtocolServer::stop()
{
  impl_->server.stop();
  if (impl_->thread.joinable()) {
    impl_->thread.join();
  }
}

}  // namespace preseg::segmenter
