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

#include "preseg/segmenter/wire.hpp"

#include <openssl/evp.h>

namespace preseg::segmenter::wire
{

std::string base64Encode(std::span<const std::uint8_t> bytes)
{
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char *>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64Decode(std::string_view text)
{
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kProtocol, "base64 length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char *>(text.data()), static_cast<int>(text.size()));
  if (n < 0) {
    throw Error(ErrorCode::kProtocol, "malformed base64");
  }
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t pad = 0;
  for (auto it = text.rbegin(); it != text.rend() && *it == '=' && pad < 2; ++it) {
    ++pad;
  }
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

nlohmann::json toJson(const Rle & rle)
{
  return {{"width", rle.width}, {"height", rle.height}, {"counts", rle.counts}};
}

Rle rleFromJson(const nlohmann::json & j)
{
  Rle rle;
  rle.width = j.at("width").get<int>();
  rle.height = j.at("height").get<int>();
  rle.counts = j.at("counts").get<std::vector<std::uint32_t>>();
  return rle;
}

nlohmann::json toJson(const SegMask & mask)
{
  return {{"frame", mask.frame}, {"object_id", mask.object_id}, {"rle", toJson(mask.rle)}};
}

SegMask maskFromJson(const nlohmann::json & j)
{
  return {j.at("frame").get<std::uint32_t>(), j.at("object_id").get<int>(), rleFromJson(j.at("rle"))};
}

nlohmann::json toJson(const PointPrompt & p)
{
  return {{"x", p.x}, {"y", p.y}, {"positive", p.positive}};
}

PointPrompt pointFromJson(const nlohmann::json & j)
{
  return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("positive").get<bool>()};
}

nlohmann::json errorBody(ErrorCode code, const std::string & message)
{
  return {{"error", toString(code)}, {"message", message}};
}

int httpStatus(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kPromptInfeasible: return 422;
    case ErrorCode::kConflict: return 409;
    default: return 400;
  }
}

void throwFromErrorBody(int status, const std::string & body)
{
  std::string code;
  std::string message = body;
  try {
    const auto j = nlohmann::json::parse(body);
    code = j.value("error", "");
    message = j.value("message", body);
  } catch (const nlohmann::json::exception &) {
  }
  for (auto c : {ErrorCode::kNotFound, ErrorCode::kPromptInfeasible, ErrorCode::kConflict, ErrorCode::kProtocol,
                 ErrorCode::kParameter, ErrorCode::kRange})
  {
    if (code == toString(c)) {
      throw Error(c, message);
    }
  }
  throw Error(ErrorCode::kProtocol, "HTTP " + std::to_string(status) + ": " + message);
}

}  // namespace preseg::segmenter::wire
