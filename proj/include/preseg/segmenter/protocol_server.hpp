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

#ifndef PRESEG__SEGMENTER__PROTOCOL_SERVER_HPP_
#define PRESEG__SEGMENTER__PROTOCOL_SERVER_HPP_

#include "preseg/segmenter/segmenter.hpp"

#include <memory>
#include <string>

namespace preseg::segmenter
{

/// Serves any Segmenter over the HTTP protocol in wire.hpp. Used to host the
/// mock for out-of-process clients and to run the client contract tests.
class ProtocolServer
{
public:
  explicit ProtocolServer(Segmenter & backend);
  ~ProtocolServer();
  ProtocolServer(const ProtocolServer &) = delete;
  ProtocolServer & operator=(const ProtocolServer &) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port.
  int start(const std::string & host = "127.0.0.1", int port = 0);
  /// Serves on the calling thread until stop() is called from elsewhere.
  void listen(const std::string & host, int port);
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace preseg::segmenter

#endif  // PRESEG__SEGMENTER__PROTOCOL_SERVER_HPP_
