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

#include <gtest/gtest.h>

#include <random>

namespace
{

using namespace preseg;
using namespace preseg::segmenter;

TEST(Wire, Base64KnownVectors)
{
  auto enc = [](std::string s) {
    return wire::base64Encode({reinterpret_cast<const std::uint8_t *>(s.data()), s.size()});
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
}

TEST(Wire, Base64RoundTrip)
{
  std::mt19937 rng(5);
  for (std::size_t n = 0; n < 64; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (auto & b : bytes) {
      b = static_cast<std::uint8_t>(rng());
    }
    EXPECT_EQ(wire::base64Decode(wire::base64Encode(bytes)), bytes);
  }
}

TEST(Wire, Base64RejectsGarbage)
{
  EXPECT_THROW(wire::base64Decode("abc"), Error);
  EXPECT_THROW(wire::base64Decode("ab!@"), Error);
}

TEST(Wire, MaskJsonShape)
{
  const SegMask m{3, 7, {2, 2, {1, 2, 1}}};
  const auto j = wire::toJson(m);
  EXPECT_EQ(j.dump(), R"({"frame":3,"object_id":7,"rle":{"counts":[1,2,1],"height":2,"width":2}})");
  EXPECT_EQ(wire::maskFromJson(j), m);
}

TEST(Wire, ErrorsRoundTripThroughBodies)
{
  for (auto code : {ErrorCode::kNotFound, ErrorCode::kPromptInfeasible, ErrorCode::kProtocol}) {
    const auto body = wire::errorBody(code, "boom").dump();
    try {
      wire::throwFromErrorBody(wire::httpStatus(code), body);
      FAIL();
    } catch (const Error & e) {
      EXPECT_EQ(e.code(), code);
      EXPECT_EQ(e.detail(), "boom");
    }
  }
  try {
    wire::throwFromErrorBody(500, "not json");
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

}  // namespace
