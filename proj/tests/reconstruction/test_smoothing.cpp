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

#include "preseg/reconstruction/smoothing.hpp"

#include <gtest/gtest.h>

#include <random>

namespace
{

using namespace preseg::reconstruction;

// Points filling a box of the given size around `center`, all with `label`.
void addBox(LabeledScan & scan, Eigen::Vector3d center, Eigen::Vector3d size, int label)
{
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      for (int k = 0; k <= 4; ++k) {
        scan.points.push_back(center + (Eigen::Vector3d(i, j, k) / 4.0 - Eigen::Vector3d::Constant(0.5)).cwiseProduct(size));
        scan.labels.push_back(label);
      }
    }
  }
}

std::vector<int> relabeled(std::vector<LabeledScan> scans, const std::map<int, int> & remap)
{
  std::vector<int> out;
  for (auto & s : scans) {
    applyRemap(s.labels, remap);
    out.insert(out.end(), s.labels.begin(), s.labels.end());
  }
  return out;
}

TEST(Smoothing, StableLabelsAreUnchanged)
{
  std::vector<LabeledScan> scans(5);
  for (auto & s : scans) {
    addBox(s, {5, 0, 0}, {4, 2, 1.5}, 3);
    addBox(s, {0, 8, 0}, {1, 1, 2}, 8);
  }
  const auto remap = interframeSmoothing(scans);
  for (const auto & [from, to] : remap) {
    EXPECT_EQ(from, to);
  }
}

TEST(Smoothing, FlickeringIdsCollapse)
{
  std::vector<LabeledScan> scans(8);
  for (std::size_t f = 0; f < scans.size(); ++f) {
    // Moving 0.1 m per frame with slightly varying extent.
    addBox(scans[f], {0.1 * f, 0, 0}, {4.0 + 0.05 * (f % 2), 2, 1.5}, f % 2 == 0 ? 12 : 5);
  }
  const auto remap = interframeSmoothing(scans);
  EXPECT_EQ(remap.at(12), 5);
  EXPECT_EQ(remap.at(5), 5);
}

TEST(Smoothing, NeighborsTwoMetersApartStaySeparate)
{
  std::vector<LabeledScan> scans(6);
  for (std::size_t f = 0; f < scans.size(); ++f) {
    // Same-size objects; ids swap every frame so only the gate separates them.
    addBox(scans[f], {0, 0, 0}, {1, 1, 1}, f % 2 == 0 ? 1 : 2);
    addBox(scans[f], {2, 0, 0}, {1, 1, 1}, f % 2 == 0 ? 3 : 4);
  }
  const auto remap = interframeSmoothing(scans);
  EXPECT_EQ(remap.at(1), 1);
  EXPECT_EQ(remap.at(2), 1);
  EXPECT_EQ(remap.at(3), 3);
  EXPECT_EQ(remap.at(4), 3);
}

TEST(Smoothing, SizeGateBlocksDifferentBoxes)
{
  std::vector<LabeledScan> scans(2);
  addBox(scans[0], {0, 0, 0}, {4, 2, 1.5}, 1);
  addBox(scans[1], {0, 0, 0}, {2, 2, 1.5}, 2);
  const auto remap = interframeSmoothing(scans);
  EXPECT_EQ(remap.at(2), 2);
}

TEST(Smoothing, ConservesPointCountsAndUnlabeledPoints)
{
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<LabeledScan> scans(10);
  std::size_t total = 0;
  std::size_t unlabeled = 0;
  for (auto & s : scans) {
    for (int i = 0; i < 200; ++i) {
      s.points.emplace_back(u(rng), u(rng), u(rng));
      s.labels.push_back(static_cast<int>(rng() % 6));
      unlabeled += s.labels.back() == 0;
    }
    total += s.points.size();
  }
  const auto out = relabeled(scans, interframeSmoothing(scans, {5.0, 1.0}));
  EXPECT_EQ(out.size(), total);
  EXPECT_EQ(static_cast<std::size_t>(std::count(out.begin(), out.end(), 0)), unlabeled);
}

}  // namespace
