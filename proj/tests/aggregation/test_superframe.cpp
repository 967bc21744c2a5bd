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

#include "preseg/aggregation/superframe.hpp"
#include "preseg/common/error.hpp"

#include <gtest/gtest.h>

#include <random>

namespace
{

using namespace preseg;
using namespace preseg::aggregation;
using data::Point;
using data::PointFrame;
using data::Pose;

struct Sequence
{
  std::vector<PointFrame> frames;
  std::vector<Pose> poses;
};

Sequence randomSequence(int n, std::uint32_t seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Sequence s;
  for (int f = 0; f < n; ++f) {
    PointFrame frame;
    frame.frame_index = static_cast<std::uint32_t>(f);
    const int count = 5 + static_cast<int>(rng() % 20);
    for (int i = 0; i < count; ++i) {
      frame.points.push_back({static_cast<float>(20 * u(rng)), static_cast<float>(20 * u(rng)),
                              static_cast<float>(2 * u(rng)), static_cast<float>(u(rng) + 1)});
    }
    s.frames.push_back(frame);
    const Eigen::Matrix3d r = Eigen::AngleAxisd(0.4 * u(rng), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    s.poses.push_back(Pose::fromRotationTranslation(r, {100 * u(rng), 100 * u(rng), u(rng)}));
  }
  return s;
}

TEST(Superframe, ZeroHalfWidthIsCenterFrame)
{
  const auto s = randomSequence(5, 1);
  const Superframe sf = buildSuperframe(s.frames, s.poses, 2, 0);
  ASSERT_EQ(sf.size(), s.frames[2].points.size());
  for (std::size_t i = 0; i < sf.size(); ++i) {
    EXPECT_EQ(sf.points[i].frame, 2u);
    EXPECT_EQ(sf.points[i].index, i);
    EXPECT_NEAR((sf.points[i].position.cast<double>() - s.frames[2].points[i].position()).norm(), 0.0, 1e-6);
  }
}

TEST(Superframe, TranslationShiftsNeighborPoints)
{
  std::vector<PointFrame> frames(2);
  frames[0].points = {{0, 0, 0, 1}};
  frames[1].points = {{1, 2, 3, 0}, {-1, 0, 0, 0}, {0, 0, 5, 0}};
  const std::vector<Pose> poses{Pose::identity(),
                                Pose::fromRotationTranslation(Eigen::Matrix3d::Identity(), {1, 0, 0})};
  const Superframe sf = buildSuperframe(frames, poses, 0, 1);
  ASSERT_EQ(sf.size(), 4u);
  // Frame 1 sits 1 m ahead of frame 0, so its points move +1 in x.
  const std::vector<Eigen::Vector3f> expected{{2, 2, 3}, {0, 0, 0}, {1, 0, 5}};
  for (int i = 0; i < 3; ++i) {
    const auto & p = sf.points[static_cast<std::size_t>(1 + i)];
    EXPECT_EQ(p.frame, 1u);
    EXPECT_TRUE(p.position.isApprox(expected[static_cast<std::size_t>(i)], 1e-6f) ||
                (p.position - expected[static_cast<std::size_t>(i)]).norm() < 1e-6f);
  }
}

TEST(Superframe, WindowClippedAtSequenceStart)
{
  const auto s = randomSequence(6, 2);
  const Superframe sf = buildSuperframe(s.frames, s.poses, 1, 3);
  EXPECT_EQ(sf.first_frame, 0u);
  EXPECT_EQ(sf.last_frame, 4u);
  std::size_t expected = 0;
  for (int f = 0; f <= 4; ++f) {
    expected += s.frames[static_cast<std::size_t>(f)].points.size();
  }
  EXPECT_EQ(sf.size(), expected);
}

TEST(Superframe, CenterOutOfRange)
{
  const auto s = randomSequence(3, 3);
  try {
    buildSuperframe(s.frames, s.poses, 3, 1);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
}

TEST(Superframe, ProvenanceRoundTripWithinTolerance)
{
  const auto s = randomSequence(12, 4);
  for (std::uint32_t center : {0u, 5u, 11u}) {
    const Superframe sf = buildSuperframe(s.frames, s.poses, center, 4);
    for (const auto & p : sf.points) {
      const Eigen::Vector3d src = s.frames[p.frame].points[p.index].position();
      const Eigen::Vector3d expected = relativePose(s.poses, p.frame, center).apply(src);
      EXPECT_LT((p.position.cast<double>() - expected).norm(), 1e-5);
    }
  }
}

TEST(Superframe, ProvenanceIsAPartitionOfSourcePoints)
{
  const auto s = randomSequence(8, 5);
  const Superframe sf = buildSuperframe(s.frames, s.poses, 4, 10);
  std::vector<std::vector<int>> hits(s.frames.size());
  for (std::size_t f = 0; f < s.frames.size(); ++f) {
    hits[f].assign(s.frames[f].points.size(), 0);
  }
  for (const auto & p : sf.points) {
    ++hits[p.frame][p.index];
  }
  for (const auto & h : hits) {
    for (int c : h) {
      EXPECT_EQ(c, 1);
    }
  }
}

}  // namespace
