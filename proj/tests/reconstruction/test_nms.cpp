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

#include "preseg/reconstruction/nms.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace
{

using namespace preseg;
using namespace preseg::reconstruction;
using aggregation::VoxelKey;

// Grid of every key in [0,n)^3; voxel id of (x,y,z) is (x*n + y)*n + z.
aggregation::VoxelGrid cube(int n)
{
  std::vector<VoxelKey> keys;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        keys.emplace_back(x, y, z);
      }
    }
  }
  return test::gridFromKeys(keys, 1.0);
}

VoxelSet block(const aggregation::VoxelGrid & g, VoxelKey lo, VoxelKey hi)
{
  VoxelSet out;
  for (int x = lo.x(); x < hi.x(); ++x) {
    for (int y = lo.y(); y < hi.y(); ++y) {
      for (int z = lo.z(); z < hi.z(); ++z) {
        out.push_back(*g.find({x, y, z}));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<int, std::size_t> labelCounts(const std::vector<int> & labels)
{
  std::map<int, std::size_t> c;
  for (int l : labels) {
    if (l != kUnlabeled) {
      ++c[l];
    }
  }
  return c;
}

TEST(Boxes, HandComputedOverlap)
{
  const Box a{{0, 0, 0}, {2, 2, 2}};
  const Box b{{1, 0, 0}, {3, 2, 2}};
  EXPECT_DOUBLE_EQ(boxIoU(a, b), 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(boxContainment(a, b), 0.5);
  const Box far{{5, 5, 5}, {6, 6, 6}};
  EXPECT_DOUBLE_EQ(boxIoU(a, far), 0.0);
  EXPECT_TRUE(equivalent(a, a));
  EXPECT_FALSE(equivalent(a, b));
}

TEST(Boxes, VoxelBoxCoversCells)
{
  const auto g = cube(4);
  const Box b = voxelBox(block(g, {1, 1, 1}, {3, 2, 2}), g);
  EXPECT_EQ(b.lo, Eigen::Vector3d(1, 1, 1));
  EXPECT_EQ(b.hi, Eigen::Vector3d(3, 2, 2));
  EXPECT_DOUBLE_EQ(b.volume(), 2.0);
}

TEST(Nms3d, IdenticalBoxesMerge)
{
  const auto g = cube(6);
  const auto v = block(g, {0, 0, 0}, {2, 2, 2});
  const auto r = nms3d({{3, v}, {1, v}}, g);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].id, 1);  // equal size: smaller id first
}

TEST(Nms3d, DisjointBoxesStay)
{
  const auto g = cube(6);
  const auto r = nms3d({{1, block(g, {0, 0, 0}, {2, 2, 2})}, {2, block(g, {3, 3, 3}, {5, 5, 5})}}, g);
  EXPECT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(labelCounts(r.labels), (std::map<int, std::size_t>{{1, 8}, {2, 8}}));
}

TEST(Nms3d, ContainedBoxMergesIntoLargerOne)
{
  // 2x2x2 inside 4x4x4: IoU 1/8, containment 1.
  const auto g = cube(6);
  const auto small = block(g, {1, 1, 1}, {3, 3, 3});
  const auto large = block(g, {0, 0, 0}, {4, 4, 4});
  const auto r = nms3d({{1, small}, {2, large}}, g);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].id, 2);
  EXPECT_EQ(r.kept[0].voxels, large);
}

TEST(Nms3d, ConservesTheUnionOfMemberships)
{
  std::mt19937 rng(4);
  const auto g = cube(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Candidate> cands;
    std::set<aggregation::VoxelId> uni;
    for (int k = 0; k < 6; ++k) {
      VoxelKey lo(rng() % 6, rng() % 6, rng() % 6);
      VoxelKey hi = lo + VoxelKey(1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3);
      hi = hi.cwiseMin(VoxelKey::Constant(8));
      cands.push_back({k, block(g, lo, hi)});
      uni.insert(cands.back().voxels.begin(), cands.back().voxels.end());
    }
    const auto r = nms3d(cands, g);
    std::size_t total = 0;
    for (const auto & [l, n] : labelCounts(r.labels)) {
      total += n;
    }
    EXPECT_EQ(total, uni.size());
    for (auto v : uni) {
      EXPECT_NE(r.labels[v], kUnlabeled);
    }
    // Passes repeat until the kept clusters are pairwise distinct.
    for (std::size_t a = 0; a < r.kept.size(); ++a) {
      for (std::size_t b = a + 1; b < r.kept.size(); ++b) {
        EXPECT_FALSE(equivalent(voxelBox(r.kept[a].voxels, g), voxelBox(r.kept[b].voxels, g)));
      }
    }
  }
}

TEST(LabelGrowth, Examples)
{
  const auto pair = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 0, 0)}, 1.0);
  std::vector<int> l{4, kUnlabeled};
  labelGrowth(l, pair);
  EXPECT_EQ(l, (std::vector<int>{4, 4}));

  // Center voxel (1,0,0) with neighbors A, A, B.
  const auto g = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 0, 0), VoxelKey(2, 0, 0), VoxelKey(1, 1, 0)}, 1.0);
  const auto center = *g.find({1, 0, 0});
  std::vector<int> m(4);
  m[*g.find({0, 0, 0})] = 7;
  m[*g.find({1, 1, 0})] = 7;
  m[*g.find({2, 0, 0})] = 3;
  m[center] = kUnlabeled;
  labelGrowth(m, g);
  EXPECT_EQ(m[center], 7);

  const auto t = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 0, 0), VoxelKey(2, 0, 0)}, 1.0);
  std::vector<int> n{9, kUnlabeled, 5};
  labelGrowth(n, t);
  EXPECT_EQ(n[1], 5);
}

TEST(LabelGrowth, FillsConnectedVoxelsOnlyAndConserves)
{
  const auto g =
    test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 0, 0), VoxelKey(2, 0, 0), VoxelKey(3, 0, 0), VoxelKey(9, 9, 9)}, 1.0);
  std::vector<int> l{1, kUnlabeled, kUnlabeled, kUnlabeled, kUnlabeled};
  labelGrowth(l, g, 2);
  EXPECT_EQ(l, (std::vector<int>{1, 1, 1, kUnlabeled, kUnlabeled}));
  labelGrowth(l, g);
  EXPECT_EQ(l, (std::vector<int>{1, 1, 1, 1, kUnlabeled}));
}

// ---- tracks ----------------------------------------------------------------

ObjectTrack track(int id, std::map<std::uint32_t, Box> boxes, std::size_t voxels_per_frame = 1)
{
  ObjectTrack t;
  t.id = id;
  for (const auto & [f, b] : boxes) {
    VoxelSet v(voxels_per_frame);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = static_cast<aggregation::VoxelId>(i);
    }
    t.frames[f] = {v, b};
  }
  return t;
}

std::map<std::uint32_t, Box> span(std::uint32_t first, std::uint32_t last, const Box & b)
{
  std::map<std::uint32_t, Box> out;
  for (auto f = first; f <= last; ++f) {
    out[f] = b;
  }
  return out;
}

const Box kUnit{{0, 0, 0}, {1, 1, 1}};
const Box kFar{{10, 10, 10}, {11, 11, 11}};

TEST(TemporalEquivalence, LiteralFormulaExamples)
{
  const auto a = track(1, span(0, 10, kUnit));
  EXPECT_DOUBLE_EQ(*temporalEquivalence(a, a), 1.1);

  auto b1 = span(0, 9, kUnit);
  auto b2 = span(5, 14, kUnit);
  for (std::uint32_t f = 10; f <= 14; ++f) {
    b2[f] = kFar;
  }
  EXPECT_DOUBLE_EQ(*temporalEquivalence(track(1, b1), track(2, b2)), 1.25);

  EXPECT_FALSE(temporalEquivalence(track(1, span(0, 4, kUnit)), track(2, span(10, 14, kUnit))));
  // Touching spans have zero overlap length.
  EXPECT_FALSE(temporalEquivalence(track(1, span(0, 4, kUnit)), track(2, span(4, 8, kUnit))));
}

// Independent reference: explicit frame loop over the union, own box math.
std::optional<double> psiOracle(const ObjectTrack & a, const ObjectTrack & b)
{
  auto vol = [](const Box & x) {
    double v = 1;
    for (int k = 0; k < 3; ++k) {
      v *= std::max(0.0, x.hi[k] - x.lo[k]);
    }
    return v;
  };
  auto eq = [&](const Box & x, const Box & y) {
    Box i;
    for (int k = 0; k < 3; ++k) {
      i.lo[k] = std::max(x.lo[k], y.lo[k]);
      i.hi[k] = std::min(x.hi[k], y.hi[k]);
    }
    const double inter = vol(i);
    const double iou = inter / (vol(x) + vol(y) - inter);
    const double cont = inter / std::min(vol(x), vol(y));
    return iou >= 0.5 || cont >= 0.8;
  };
  std::set<std::uint32_t> uni;
  for (const auto & [f, x] : a.frames) {
    uni.insert(f);
  }
  for (const auto & [f, x] : b.frames) {
    uni.insert(f);
  }
  int num = 0;
  for (auto f : uni) {
    if (a.frames.count(f) && b.frames.count(f) && eq(a.frames.at(f).box, b.frames.at(f).box)) {
      ++num;
    }
  }
  const int den = std::min<int>(a.frames.rbegin()->first, b.frames.rbegin()->first) -
                  std::max<int>(a.frames.begin()->first, b.frames.begin()->first);
  if (den <= 0) {
    return std::nullopt;
  }
  return static_cast<double>(num) / den;
}

ObjectTrack randomTrack(int id, std::mt19937 & rng, std::uint32_t frames = 20)
{
  ObjectTrack t;
  t.id = id;
  const auto first = static_cast<std::uint32_t>(rng() % frames);
  const auto last = first + static_cast<std::uint32_t>(rng() % (frames - first));
  for (auto f = first; f <= last; ++f) {
    if (f != first && f != last && rng() % 4 == 0) {
      continue;  // gaps
    }
    Box b;
    b.lo = Eigen::Vector3d(rng() % 3, rng() % 3, 0);
    b.hi = b.lo + Eigen::Vector3d(1 + rng() % 3, 1 + rng() % 3, 1);
    VoxelSet v(1 + rng() % 5);
    std::iota(v.begin(), v.end(), 0u);
    t.frames[f] = {v, b};
  }
  return t;
}

TEST(TemporalEquivalence, MatchesFrameLoopOnRandomPairs)
{
  std::mt19937 rng(12);
  int undefined = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = randomTrack(1, rng);
    const auto b = randomTrack(2, rng);
    const auto got = temporalEquivalence(a, b);
    const auto want = psiOracle(a, b);
    ASSERT_EQ(got.has_value(), want.has_value()) << trial;
    if (got) {
      EXPECT_EQ(*got, *want) << trial;
    } else {
      ++undefined;
    }
  }
  EXPECT_GT(undefined, 0);
}

// Same greedy rule, recomputing everything from scratch on each step.
std::vector<std::set<int>> nms4dOracle(std::vector<ObjectTrack> tracks, double threshold)
{
  std::map<int, std::set<int>> members;
  for (const auto & t : tracks) {
    members[t.id] = {t.id};
  }
  for (;;) {
    std::stable_sort(tracks.begin(), tracks.end(), [](const ObjectTrack & a, const ObjectTrack & b) {
      return a.voxelCount() != b.voxelCount() ? a.voxelCount() > b.voxelCount() : a.id < b.id;
    });
    bool done = true;
    for (std::size_t i = 0; i < tracks.size() && done; ++i) {
      for (std::size_t j = i + 1; j < tracks.size() && done; ++j) {
        const auto p = psiOracle(tracks[i], tracks[j]);
        if (p && *p >= threshold) {
          for (const auto & [f, tf] : tracks[j].frames) {
            auto & d = tracks[i].frames[f];
            std::set<aggregation::VoxelId> u(d.voxels.begin(), d.voxels.end());
            u.insert(tf.voxels.begin(), tf.voxels.end());
            d.voxels.assign(u.begin(), u.end());
            d.box = d.box.merged(tf.box);
          }
          members[tracks[i].id].insert(members[tracks[j].id].begin(), members[tracks[j].id].end());
          members.erase(tracks[j].id);
          tracks.erase(tracks.begin() + static_cast<std::ptrdiff_t>(j));
          done = false;
        }
      }
    }
    if (done) {
      break;
    }
  }
  std::vector<std::set<int>> out;
  for (const auto & [id, m] : members) {
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::set<int>> partition(const Nms4dResult & r)
{
  std::map<int, std::set<int>> groups;
  for (const auto & [from, to] : r.remap) {
    groups[to].insert(from);
  }
  std::vector<std::set<int>> out;
  for (const auto & [id, g] : groups) {
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Nms4d, DuplicatesCollapse)
{
  const auto r = nms4d({track(1, span(0, 5, kUnit)), track(2, span(0, 5, kUnit))}, 0.3);
  ASSERT_EQ(r.tracks.size(), 1u);
  EXPECT_EQ(r.tracks[0].id, 1);
  EXPECT_EQ(r.remap.at(2), 1);
}

TEST(Nms4d, DisjointTracksNeverMerge)
{
  const auto r = nms4d({track(1, span(0, 5, kUnit)), track(2, span(6, 9, kUnit))}, 0.0);
  EXPECT_EQ(r.tracks.size(), 2u);
}

TEST(Nms4d, PairwiseFragmentsBecomeOneTrack)
{
  const auto r = nms4d(
    {track(1, span(0, 6, kUnit)), track(2, span(3, 9, kUnit), 2), track(3, span(5, 12, kUnit), 3)}, 0.3);
  ASSERT_EQ(r.tracks.size(), 1u);
  EXPECT_EQ(r.tracks[0].id, 3);  // most voxels
  EXPECT_EQ(r.tracks[0].firstFrame(), 0u);
  EXPECT_EQ(r.tracks[0].lastFrame(), 12u);
}

TEST(Nms4d, MatchesExhaustiveOracleAndIsIdempotent)
{
  std::mt19937 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ObjectTrack> tracks;
    const int n = 2 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) {
      tracks.push_back(randomTrack(k + 1, rng, 12));
    }
    const double thr = (rng() % 8) * 0.2;
    const auto r = nms4d(tracks, thr);
    EXPECT_EQ(partition(r), nms4dOracle(tracks, thr)) << trial;
    const auto again = nms4d(r.tracks, thr);
    EXPECT_EQ(again.tracks.size(), r.tracks.size());
    // Voxel conservation per frame.
    std::map<std::uint32_t, std::set<aggregation::VoxelId>> before;
    std::map<std::uint32_t, std::set<aggregation::VoxelId>> after;
    for (const auto & t : tracks) {
      for (const auto & [f, tf] : t.frames) {
        before[f].insert(tf.voxels.begin(), tf.voxels.end());
      }
    }
    for (const auto & t : r.tracks) {
      for (const auto & [f, tf] : t.frames) {
        after[f].insert(tf.voxels.begin(), tf.voxels.end());
      }
    }
    EXPECT_EQ(before, after);
  }
}

TEST(Nms4d, RaisingTheThresholdNeverAddsMerges)
{
  std::mt19937 rng(33);
  int violations = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ObjectTrack> tracks;
    for (int k = 0; k < 5; ++k) {
      tracks.push_back(randomTrack(k + 1, rng, 12));
    }
    std::size_t prev_tracks = 0;
    for (double thr = 0.0; thr <= 1.6; thr += 0.2) {
      const auto n = nms4d(tracks, thr).tracks.size();
      violations += n < prev_tracks;
      prev_tracks = n;
    }
  }
  EXPECT_EQ(violations, 0);
}

}  // namespace
