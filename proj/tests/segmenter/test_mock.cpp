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

#include "preseg/common/error.hpp"
#include "preseg/segmenter/mock_segmenter.hpp"

#include <Eigen/Core>
#include <gtest/gtest.h>

#include <deque>

namespace
{

using namespace preseg;
using namespace preseg::segmenter;
using alignment::RgbImage;

RgbImage uniform(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y)[0] = r;
      img.at(x, y)[1] = g;
      img.at(x, y)[2] = b;
    }
  }
  return img;
}

// Left half red, right half blue.
RgbImage twoTone(int w, int h)
{
  RgbImage img = uniform(w, h, 200, 30, 30);
  for (int y = 0; y < h; ++y) {
    for (int x = w / 2; x < w; ++x) {
      img.at(x, y)[0] = 30;
      img.at(x, y)[2] = 200;
    }
  }
  return img;
}

bool fourConnected(const Bitmask & m)
{
  std::size_t start = m.bits.size();
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    if (m.bits[i]) {
      start = i;
      break;
    }
  }
  if (start == m.bits.size()) {
    return true;
  }
  std::vector<std::uint8_t> seen(m.bits.size(), 0);
  std::deque<std::size_t> q{start};
  seen[start] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const std::size_t i = q.front();
    q.pop_front();
    const int x = static_cast<int>(i % m.width);
    const int y = static_cast<int>(i / m.width);
    const int nx[4] = {x + 1, x - 1, x, x};
    const int ny[4] = {y, y, y + 1, y - 1};
    for (int k = 0; k < 4; ++k) {
      if (nx[k] < 0 || ny[k] < 0 || nx[k] >= m.width || ny[k] >= m.height) {
        continue;
      }
      const std::size_t j = static_cast<std::size_t>(ny[k]) * m.width + nx[k];
      if (m.bits[j] && !seen[j]) {
        seen[j] = 1;
        ++reached;
        q.push_back(j);
      }
    }
  }
  return reached == m.count();
}

TEST(FloodFill, UniformImageSaturates)
{
  const auto img = uniform(20, 10, 50, 60, 70);
  const std::vector<PointPrompt> pts{{10, 5, true}};
  EXPECT_EQ(floodFill(img, pts, {}).count(), 200u);
}

TEST(FloodFill, TwoToneSelectsTheRegion)
{
  const auto img = twoTone(20, 10);
  const std::vector<PointPrompt> pts{{3, 3, true}, {15, 3, false}};
  const Bitmask m = floodFill(img, pts, {});
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 20; ++x) {
      EXPECT_EQ(m.at(x, y), x < 10);
    }
  }
}

TEST(FloodFill, ToleranceHalvesUntilTheNegativeIsExcluded)
{
  // Gradient in red of 4 units per column: distance 0.10*255 = 25.5 covers
  // six columns either way, 25.5/2^2 covers one column.
  RgbImage img(30, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 30; ++x) {
      img.at(x, y)[0] = static_cast<std::uint8_t>(4 * x);
    }
  }
  const std::vector<PointPrompt> pts{{10, 1, true}, {12, 1, false}};
  const Bitmask m = floodFill(img, pts, {});
  EXPECT_TRUE(m.at(10, 1));
  EXPECT_FALSE(m.at(12, 1));
  EXPECT_TRUE(m.at(11, 1));
  EXPECT_FALSE(m.at(8, 1));
}

TEST(FloodFill, SameRegionNegativeIsInfeasible)
{
  const auto img = uniform(8, 8, 10, 10, 10);
  const std::vector<PointPrompt> pts{{1, 1, true}, {6, 6, false}};
  try {
    floodFill(img, pts, {});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kPromptInfeasible);
  }
}

TEST(FloodFill, PositiveInAnotherRegionIsInfeasible)
{
  const auto img = twoTone(20, 10);
  const std::vector<PointPrompt> pts{{3, 3, true}, {15, 3, true}};
  EXPECT_THROW(floodFill(img, pts, {}), Error);
}

TEST(FloodFill, MasksAreSingleComponents)
{
  // Checker of two colors: the fill must not jump between same-colored squares.
  RgbImage img(24, 24);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) {
      const bool a = ((x / 4) + (y / 4)) % 2 == 0;
      img.at(x, y)[1] = a ? 220 : 20;
    }
  }
  for (int sx = 0; sx < 24; sx += 5) {
    const std::vector<PointPrompt> pts{{sx, sx, true}};
    const Bitmask m = floodFill(img, pts, {});
    EXPECT_EQ(m.count(), 16u);
    EXPECT_TRUE(fourConnected(m));
  }
}

TEST(MockSegmenter, MovingBlobIsTracked)
{
  // Green disk of radius 6 moving 3 px per frame over a gray background;
  // prompts sit at the known center as propagation would place them.
  const int w = 80;
  const int h = 40;
  std::vector<RgbImage> frames;
  std::vector<Eigen::Vector2d> centers;
  for (int f = 0; f < 12; ++f) {
    RgbImage img = uniform(w, h, 120, 120, 120);
    const Eigen::Vector2d c(10.0 + 3.0 * f, 20.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if ((Eigen::Vector2d(x + 0.5, y + 0.5) - c).norm() <= 6.0) {
          img.at(x, y)[0] = 20;
          img.at(x, y)[1] = 220;
          img.at(x, y)[2] = 20;
        }
      }
    }
    frames.push_back(img);
    centers.push_back(c);
  }
  MockSegmenter seg;
  const auto s = seg.openSession(frames);
  for (std::uint32_t f = 0; f < frames.size(); ++f) {
    const std::vector<PointPrompt> pts{
      {static_cast<int>(centers[f].x()), static_cast<int>(centers[f].y()), true}};
    seg.addPrompt(s, f, 1, pts);
  }
  const auto masks = seg.propagate(s);
  ASSERT_EQ(masks.size(), frames.size());
  for (const auto & m : masks) {
    const Bitmask b = decodeRle(m.rle);
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (b.at(x, y)) {
          c += Eigen::Vector2d(x + 0.5, y + 0.5);
        }
      }
    }
    c /= static_cast<double>(b.count());
    EXPECT_LT((c - centers[m.frame]).norm(), 2.0) << "frame " << m.frame;
  }
  seg.closeSession(s);
  EXPECT_EQ(seg.openSessions(), 0u);
}

}  // namespace
