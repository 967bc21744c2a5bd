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
#include "preseg/reconstruction/lift.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace
{

using namespace preseg;
using namespace preseg::reconstruction;
using aggregation::VoxelKey;
using alignment::PixelVoxelMap;
using segmenter::Bitmask;

PixelVoxelMap randomMap(int w, int h, int voxels, std::mt19937 & rng)
{
  PixelVoxelMap map(w, h);
  for (std::size_t i = 0; i < map.voxel.size(); ++i) {
    if (rng() % 3 != 0) {
      map.voxel[i] = static_cast<std::int32_t>(rng() % voxels);
      map.depth[i] = 5.0f;
    }
  }
  return map;
}

TEST(Unproject, EmptyAndFullMasks)
{
  std::mt19937 rng(1);
  const auto map = randomMap(16, 12, 30, rng);
  EXPECT_TRUE(unprojectMask(Bitmask(16, 12), map).empty());
  Bitmask full(16, 12);
  std::fill(full.bits.begin(), full.bits.end(), 1);
  std::set<aggregation::VoxelId> mapped;
  for (auto v : map.voxel) {
    if (v >= 0) {
      mapped.insert(static_cast<aggregation::VoxelId>(v));
    }
  }
  EXPECT_EQ(unprojectMask(full, map), VoxelSet(mapped.begin(), mapped.end()));
}

TEST(Unproject, RandomMasksMatchPixelLoop)
{
  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto map = randomMap(20, 15, 40, rng);
    Bitmask mask(20, 15);
    for (auto & b : mask.bits) {
      b = rng() % 2;
    }
    std::set<aggregation::VoxelId> want;
    for (int y = 0; y < 15; ++y) {
      for (int x = 0; x < 20; ++x) {
        const auto v = map.voxel[map.index(x, y)];
        if (mask.at(x, y) && v != PixelVoxelMap::kEmpty) {
          want.insert(static_cast<aggregation::VoxelId>(v));
        }
      }
    }
    EXPECT_EQ(unprojectMask(mask, map), VoxelSet(want.begin(), want.end()));
  }
}

TEST(Unproject, DimensionMismatch)
{
  try {
    unprojectMask(Bitmask(4, 4), PixelVoxelMap(4, 5));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

VoxelSet all(const aggregation::VoxelGrid & g)
{
  VoxelSet s(g.size());
  std::iota(s.begin(), s.end(), 0u);
  return s;
}

TEST(RegionGrowth, SeparatedVoxelsAndSolidBlock)
{
  const auto two = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(5, 0, 0)}, 0.1);
  EXPECT_EQ(regionGrowth(all(two), two).size(), 2u);
  std::vector<VoxelKey> keys;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      for (int z = 0; z < 3; ++z) {
        keys.emplace_back(x, y, z);
      }
    }
  }
  const auto block = test::gridFromKeys(keys, 0.1);
  const auto c = regionGrowth(all(block), block);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].size(), 27u);
}

TEST(RegionGrowth, ConnectivityVariants)
{
  // Corner-touching pair: joined only under 26-connectivity.
  const auto g = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 1, 1)}, 0.1);
  EXPECT_EQ(regionGrowth(all(g), g, 26).size(), 1u);
  EXPECT_EQ(regionGrowth(all(g), g, 18).size(), 2u);
  const auto e = test::gridFromKeys({VoxelKey(0, 0, 0), VoxelKey(1, 1, 0)}, 0.1);
  EXPECT_EQ(regionGrowth(all(e), e, 18).size(), 1u);
  EXPECT_EQ(regionGrowth(all(e), e, 6).size(), 2u);
  EXPECT_THROW(regionGrowth(all(e), e, 8), Error);
}

TEST(RegionGrowth, RandomSetsMatchUnionFind)
{
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<VoxelKey> keys;
    for (int i = 0; i < 120; ++i) {
      keys.emplace_back(rng() % 8, rng() % 8, rng() % 4);
    }
    const auto g = test::gridFromKeys(keys, 0.1);
    // Subset: every other voxel drawn at random.
    VoxelSet subset;
    for (aggregation::VoxelId v = 0; v < g.size(); ++v) {
      if (rng() % 4 != 0) {
        subset.push_back(v);
      }
    }
    std::vector<std::size_t> parent(subset.size());
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t a = 0; a < subset.size(); ++a) {
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        const VoxelKey d = g[subset[a]].key - g[subset[b]].key;
        if (d.cwiseAbs().maxCoeff() <= 1) {
          parent[find(a)] = find(b);
        }
      }
    }
    std::map<std::size_t, std::set<aggregation::VoxelId>> want;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      want[find(a)].insert(subset[a]);
    }
    std::set<std::set<aggregation::VoxelId>> want_sets;
    for (const auto & [r, s] : want) {
      want_sets.insert(s);
    }
    std::set<std::set<aggregation::VoxelId>> got_sets;
    for (const auto & c : regionGrowth(subset, g)) {
      got_sets.emplace(c.begin(), c.end());
    }
    EXPECT_EQ(got_sets, want_sets);
  }
}

// 12x12 map; mask covers the 6x6 block at (3,3). Voxel id = column inside the
// block, all at depth 5, except the listed overrides.
struct BleedFixture
{
  PixelVoxelMap map{12, 12};
  Bitmask mask{12, 12};

  BleedFixture()
  {
    for (int y = 3; y < 9; ++y) {
      for (int x = 3; x < 9; ++x) {
        mask.bits[map.index(x, y)] = 1;
        map.voxel[map.index(x, y)] = x - 3;
        map.depth[map.index(x, y)] = 5.0f;
      }
    }
  }
};

TEST(ReduceBleeding, UniformDepthIsUnchanged)
{
  BleedFixture f;
  const VoxelSet c{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(reduceBleeding(c, f.mask, f.map), c);
}

TEST(ReduceBleeding, DeepVoxelAtTheSilhouetteIsRemoved)
{
  BleedFixture f;
  // Voxel 6: background 8 m deeper, seen through the mask's right edge.
  for (int y = 3; y < 9; ++y) {
    f.map.voxel[f.map.index(8, y)] = 6;
    f.map.depth[f.map.index(8, y)] = 13.0f;
  }
  const VoxelSet c{0, 1, 2, 3, 4, 6};
  EXPECT_EQ(reduceBleeding(c, f.mask, f.map), (VoxelSet{0, 1, 2, 3, 4}));
}

TEST(ReduceBleeding, DeepVoxelInsideTheMaskIsKept)
{
  BleedFixture f;
  f.map.voxel[f.map.index(6, 6)] = 6;
  f.map.depth[f.map.index(6, 6)] = 13.0f;
  f.map.voxel[f.map.index(5, 5)] = 7;
  f.map.depth[f.map.index(5, 5)] = 5.0f;
  // 6x6 mask with a 2 px border leaves only the central 2x2 pixels interior.
  const VoxelSet c{0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(reduceBleeding(c, f.mask, f.map), c);
}

TEST(ReduceBleeding, GuardKeepsSmallClusters)
{
  BleedFixture f;
  EXPECT_EQ(reduceBleeding(VoxelSet{2}, f.mask, f.map), VoxelSet{2});
  // Half the columns deep: exactly half may go, the guard trips only above that.
  for (int y = 3; y < 9; ++y) {
    for (int x = 3; x < 6; ++x) {
      f.map.depth[f.map.index(x, y)] = 20.0f;
    }
  }
  const VoxelSet c{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(reduceBleeding(c, f.mask, f.map), (VoxelSet{0, 1, 2}));
  // Pushing one deep column off the median as well makes it four of six.
  for (int y = 3; y < 9; ++y) {
    f.map.depth[f.map.index(5, y)] = 21.5f;
  }
  EXPECT_EQ(reduceBleeding(c, f.mask, f.map), c);
}

}  // namespace
