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
#include "preseg/ground/ground_labeler.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

namespace
{

using namespace preseg;
using namespace preseg::ground;

GroundPoint gp(float x, float y, float intensity, std::uint32_t frame = 0)
{
  return {Eigen::Vector3f(x, y, 0.0f), intensity, frame, 0};
}

const std::vector<data::Pose> kIdentity{data::Pose::identity()};

TEST(Rasterize, OneCellAndFloorRule)
{
  const std::vector<GroundPoint> pts{gp(0.01f, 0.01f, 1), gp(0.15f, 0.19f, 2), gp(0.1f, 0.1f, 3)};
  const auto g = rasterizeGround(pts, kIdentity, 0.2);
  ASSERT_EQ(g.cells.size(), 1u);
  EXPECT_EQ(g.cells[0].members.size(), 3u);
  EXPECT_EQ(g.cells[0].samples, (std::vector<double>{0.0, 0.5, 1.0}));

  const std::vector<GroundPoint> neg{gp(-0.01f, 0.0f, 1)};
  EXPECT_EQ(rasterizeGround(neg, kIdentity, 0.2).cells[0].key, Eigen::Vector2i(-1, 0));
}

TEST(Rasterize, UsesPosesAndConservesPoints)
{
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> u(-10, 10);
  std::vector<data::Pose> poses{
    data::Pose::identity(), data::Pose::fromRotationTranslation(Eigen::Matrix3d::Identity(), {100, 0, 0})};
  std::vector<GroundPoint> pts;
  for (int i = 0; i < 10000; ++i) {
    pts.push_back(gp(u(rng), u(rng), u(rng), static_cast<std::uint32_t>(i % 2)));
  }
  const auto g = rasterizeGround(pts, poses, 0.2);
  std::size_t total = 0;
  for (const auto & c : g.cells) {
    total += c.members.size();
    for (auto m : c.members) {
      const double wx = pts[m].position.x() + (pts[m].frame == 1 ? 100.0 : 0.0);
      EXPECT_EQ(c.key.x(), static_cast<int>(std::floor(wx / 0.2)));
      EXPECT_EQ(g.cell_of_point[m], g.index.at(c.key));
    }
  }
  EXPECT_EQ(total, 10000u);
  const std::vector<GroundPoint> bad{gp(0, 0, 0, 5)};
  EXPECT_THROW(rasterizeGround(bad, poses, 0.2), Error);
}

TEST(CellFeatures, UniformIntensityFillsOneBin)
{
  std::vector<GroundPoint> pts;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      pts.push_back(gp(0.2f * i + 0.1f, 0.2f * j + 0.1f, 0.0f));
    }
  }
  // One brighter point sets the normalization so the rest land at 0.5.
  pts.push_back(gp(50, 50, 2.0f));
  pts.push_back(gp(-50, -50, -2.0f));
  const auto g = rasterizeGround(pts, kIdentity, 0.2);
  const auto f = cellFeatures(g, 2, 4);
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    if (std::abs(g.cells[i].key.x()) > 10) {
      continue;
    }
    EXPECT_EQ(f[i], Eigen::Vector4d(0, 0, 1, 0)) << i;
  }
}

TEST(CellFeatures, IsolatedCellSeesOnlyItself)
{
  const std::vector<GroundPoint> pts{gp(0.1f, 0.1f, 0.0f), gp(0.1f, 0.1f, 1.0f), gp(0.1f, 0.1f, 1.0f),
                                     gp(5.1f, 5.1f, 0.5f)};
  const auto g = rasterizeGround(pts, kIdentity, 0.2);
  const auto f = cellFeatures(g, 1, 2);
  EXPECT_NEAR(f[0][0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(f[0][1], 2.0 / 3.0, 1e-12);
}

TEST(CellFeatures, WindowsAreProbabilityVectors)
{
  std::mt19937 rng(2);
  std::uniform_real_distribution<float> u(0, 4);
  std::vector<GroundPoint> pts;
  for (int i = 0; i < 3000; ++i) {
    pts.push_back(gp(u(rng), u(rng), u(rng)));
  }
  const auto g = rasterizeGround(pts, kIdentity, 0.2);
  for (const auto & f : cellFeatures(g, 2, 16)) {
    EXPECT_NEAR(f.sum(), 1.0, 1e-9);
    EXPECT_GE(f.minCoeff(), 0.0);
  }
}

std::vector<Eigen::VectorXd> twoGroups(int per_group, std::mt19937 & rng, std::vector<int> * truth = nullptr)
{
  std::normal_distribution<double> g(0.0, 0.05);
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < 2 * per_group; ++i) {
    const bool second = i % 2 == 1;
    Eigen::VectorXd v(3);
    v << (second ? 5.0 : 0.0) + g(rng), g(rng), g(rng);
    out.push_back(v);
    if (truth) {
      truth->push_back(second);
    }
  }
  return out;
}

TEST(FuzzyCmeans, RecoversSeparatedGroups)
{
  std::mt19937 rng(3);
  std::vector<int> truth;
  const auto x = twoGroups(50, rng, &truth);
  const auto p = fuzzyCmeans(x, {2, 2.0, 1e-6, 300, 9});
  // Partition equivalence, independent of cluster numbering.
  std::map<int, int> map;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto [it, inserted] = map.emplace(p.labels[i], truth[i]);
    EXPECT_EQ(it->second, truth[i]);
  }
  EXPECT_EQ(map.size(), 2u);
}

TEST(FuzzyCmeans, MembershipRowsAndMonotoneObjective)
{
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Eigen::VectorXd> x;
  for (int i = 0; i < 300; ++i) {
    x.push_back(Eigen::VectorXd::NullaryExpr(4, [&](Eigen::Index) { return u(rng); }));
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = fuzzyCmeans(x, {6, 2.0, 1e-7, 200, seed});
    for (Eigen::Index i = 0; i < p.membership.rows(); ++i) {
      EXPECT_NEAR(p.membership.row(i).sum(), 1.0, 1e-9);
      EXPECT_GE(p.membership.row(i).minCoeff(), 0.0);
      EXPECT_LE(p.membership.row(i).maxCoeff(), 1.0);
    }
    for (std::size_t k = 1; k < p.objective.size(); ++k) {
      EXPECT_LE(p.objective[k], p.objective[k - 1] * (1 + 1e-12)) << k;
    }
  }
}

TEST(FuzzyCmeans, SampleOnACenterGetsFullMembership)
{
  // Three samples, three clusters: every center starts on a sample.
  std::vector<Eigen::VectorXd> x{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  const auto p = fuzzyCmeans(x, {3, 2.0, 1e-9, 5, 1});
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(p.membership.row(i).maxCoeff(), 1.0);
  }
  EXPECT_EQ(std::set<int>(p.labels.begin(), p.labels.end()).size(), 3u);
}

TEST(FuzzyCmeans, DeterministicForASeed)
{
  std::mt19937 rng(5);
  const auto x = twoGroups(40, rng);
  const auto a = fuzzyCmeans(x, {4, 2.0, 1e-6, 100, 77});
  const auto b = fuzzyCmeans(x, {4, 2.0, 1e-6, 100, 77});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.membership, b.membership);
}

TEST(FuzzyCmeans, TooFewSamples)
{
  std::vector<Eigen::VectorXd> x{Eigen::Vector2d(0, 0)};
  try {
    fuzzyCmeans(x, {2});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kParameter);
  }
}

}  // namespace
