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

#ifndef PRESEG__SEGMENTER__WIRE_HPP_
#define PRESEG__SEGMENTER__WIRE_HPP_

#include "preseg/common/error.hpp"
#include "preseg/segmenter/segmenter.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// JSON shapes of the segmenter HTTP protocol.
//
//   POST   /session                 {"frames": [<base64 PNG>, ...]}
//                                   -> {"session_id", "frame_count", "width", "height"}
//   POST   /session/{id}/prompts    {"frame", "object_id", "points": [{"x", "y", "positive"}]}
//                                   -> {"mask": <rle>}
//   POST   /session/{id}/propagate  -> {"masks": [{"frame", "object_id", "rle": <rle>}]}
//   DELETE /session/{id}            -> {}
//
//   <rle> = {"width", "height", "counts": [background, foreground, ...]}
//   errors: status 400/404/422 with {"error": <code>, "message": <text>}

namespace preseg::segmenter::wire
{

std::string base64Encode(std::span<const std::uint8_t> bytes);
/// Throws Error(kProtocol) on malformed input.
std::vector<std::uint8_t> base64Decode(std::string_view text);

nlohmann::json toJson(const Rle & rle);
Rle rleFromJson(const nlohmann::json & j);

nlohmann::json toJson(const SegMask & mask);
SegMask maskFromJson(const nlohmann::json & j);

nlohmann::json toJson(const PointPrompt & p);
PointPrompt pointFromJson(const nlohmann::json & j);

nlohmann::json errorBody(ErrorCode code, const std::string & message);
int httpStatus(ErrorCode code);
/// Maps an error body back to the library error.
[[noreturn]] void throwFromErrorBody(int status, const std::string & body);

}  // namespace preseg::segmenter::wire

#endif  // PRESEG__SEGMENTER__WIRE_HPP_
