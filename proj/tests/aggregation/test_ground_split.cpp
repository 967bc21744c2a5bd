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

#include "preseg/aggregation/ground_split.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace
{

using namespace preseg::aggregation;

SuperPoint at(float x, float y, float z, std::uint32_t index)
{
  return {Eigen::Vector3f(x, y, z), 0.5f, 0, index};
}

TEST(GroundSplit, PlaneAndOneRaisedPoint)
{
  Superframe sf;
  std::uint32_t n = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      sf.points.push_back(at(0.1f * i, 0.1f * j, 0.0f, n++));
    }
  }
  sf.points.push_back(at(1.0f, 1.0f, 2.0f, n++));
  const GroundSplit split = splitGround(sf);
  EXPECT_EQ(split.ground.size(), 400u);
  ASSERT_EQ(split.object.size(), 1u);
  EXPECT_EQ(split.object[0], 400u);
}

TEST(GroundSplit, EmptyInput)
{
  const GroundSplit split = splitGround(Superframe{});
  EXPECT_TRUE(split.ground.empty());
  EXPECT_TRUE(split.object.empty());
}

TEST(GroundSplit, NoisyPlaneMostlyGround)
{
  std::mt19937 rng(9);
  std::uniform_real_distribution<float> u(-10, 10);
  std::normal_distribution<float> noise(0, 0.02f);
  Superframe sf;
  for (std::uint32_t i = 0; i < 20000; ++i) {
    sf.points.push_back(at(u(rng), u(rng), noise(rng), i));
  }
  GroundSplitParams params;
  params.plane_tol = 0.1;
  const GroundSplit split = splitGround(sf, params);
  EXPECT_GE(static_cast<double>(split.ground.size()), 0.99 * 20000);
}

TEST(GroundSplit, BoxOnGroundStaysObject)
{
  Superframe sf;
  std::uint32_t n = 0;
  for (float x = -5; x < 5; x += 0.1f) {
    for (float y = -5; y < 5; y += 0.1f) {
      sf.points.push_back(at(x, y, 0, n++));
    }
  }
  const std::uint32_t box_begin = n;
  // Box walls and roof, 1.5 m tall.
  for (float a = 0; a <= 1.0f; a += 0.05f) {
    for (float z = 0.2f; z <= 1.5f; z += 0.05f) {
      sf.points.push_back(at(1.0f + a, 1.0f, z, n++));
      sf.points.push_back(at(1.0f, 1.0f + a, z, n++));
    }
    for (float b = 0; b <= 1.0f; b += 0.05f) {
      sf.points.push_back(at(1.0f + a, 1.0f + b, 1.5f, n++));
    }
  }
  const GroundSplit split = splitGround(sf);
  const std::set<std::uint32_t> ground(split.ground.begin(), split.ground.end());
  for (std::uint32_t i = box_begin; i < n; ++i) {
    EXPECT_FALSE(ground.contains(i)) << i;
  }
}

TEST(GroundSplit, PartitionProperty)
{
  std::mt19937 rng(2);
  std::uniform_real_distribution<float> u(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Superframe sf;
    const auto count = 1 + rng() % 500;
    for (std::uint32_t i = 0; i < count; ++i) {
      sf.points.push_back(at(u(rng), u(rng), u(rng) * 0.3f, i));
    }
    const GroundSplit split = splitGround(sf);
    EXPECT_EQ(split.ground.size() + split.object.size(), sf.size());
    std::set<std::uint32_t> all(split.ground.begin(), split.ground.end());
    all.insert(split.object.begin(), split.object.end());
    EXPECT_EQ(all.size(), sf.size());
  }
}

TEST(GroundSplit, CeilingOnlyWhenEnabled)
{
  Superframe sf;
  std::uint32_t n = 0;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      sf.points.push_back(at(0.1f * i, 0.1f * j, 0.0f, n++));
      sf.points.push_back(at(0.1f * i, 0.1f * j, 3.0f, n++));
    }
  }
  GroundSplitParams params;
  EXPECT_EQ(splitGround(sf, params).ground.size(), 900u);
  params.ceiling = true;
  EXPECT_EQ(splitGround(sf, params).ground.size(), 1800u);
}

}  // namespace
