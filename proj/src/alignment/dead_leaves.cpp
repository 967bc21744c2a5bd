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

#include "preseg/alignment/dead_leaves.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace preseg::alignment
{

GrayImage deadLeaves(int width, int height, std::uint64_t seed, int disks)
{
  GrayImage img(width, height, 0.5f);
  std::vector<bool> covered(img.pixels.size(), false);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r_min = 2.0;
  const double r_max = std::max(width, height) / 4.0;
  // Disks are laid front to back; a pixel keeps the first disk that covers it.
  for (int n = 0; n < disks; ++n) {
    // Radius density ~ r^-3 between r_min and r_max.
    const double u = unit(rng);
    const double r = 1.0 / std::sqrt((1.0 - u) / (r_min * r_min) + u / (r_max * r_max));
    const double cx = unit(rng) * width;
    const double cy = unit(rng) * height;
    const float gray = static_cast<float>(unit(rng));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        if (!covered[i] && dx * dx + dy * dy <= r * r) {
          covered[i] = true;
          img.pixels[i] = gray;
        }
      }
    }
  }
  return img;
}

std::vector<GrayImage> deadLeavesCorpus(int count, int width, int height, std::uint64_t seed)
{
  std::vector<GrayImage> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    corpus.push_back(deadLeaves(width, height, seed * 1000003ull + static_cast<std::uint64_t>(i)));
  }
  return corpus;
}

}  // namespace preseg::alignment
