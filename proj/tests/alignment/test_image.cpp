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

#include "preseg/alignment/image.hpp"
#include "preseg/common/error.hpp"

#include <gtest/gtest.h>

#include <random>

namespace
{

using namespace preseg;
using namespace preseg::alignment;

TEST(Png, RoundTripIsExact)
{
  std::mt19937 rng(1);
  RgbImage img(37, 21);
  for (auto & p : img.pixels) {
    p = static_cast<std::uint8_t>(rng());
  }
  EXPECT_EQ(decodePng(encodePng(img)), img);
}

TEST(Png, GarbageIsAnError)
{
  std::vector<std::uint8_t> junk(100, 7);
  EXPECT_THROW(decodePng(junk), Error);
  auto png = encodePng(RgbImage(4, 4));
  png.resize(png.size() / 2);
  EXPECT_THROW(decodePng(png), Error);
}

TEST(Gray, LumaWeights)
{
  RgbImage img(1, 1);
  img.at(0, 0)[0] = 255;
  EXPECT_NEAR(toGray(img).at(0, 0), 0.299, 1e-6);
}

TEST(Gray, CenterCrop)
{
  GrayImage img(6, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      img.at(x, y) = static_cast<float>(10 * y + x);
    }
  }
  const GrayImage c = centerCrop(img, 2, 2);
  EXPECT_EQ(c.at(0, 0), 12.0f);
  EXPECT_EQ(c.at(1, 1), 23.0f);
  EXPECT_TRUE(centerCrop(img, 7, 2).empty());
}

}  // namespace
