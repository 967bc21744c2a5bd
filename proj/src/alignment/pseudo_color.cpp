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

#include "preseg/alignment/pseudo_color.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace preseg::alignment
{

namespace
{

constexpr double kDeg = std::numbers::pi / 180.0;

std::uint8_t quantize(double v)
{
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void PseudoColorParams::validate() const
{
  if (!(saturation >= 0.0 && saturation <= 1.0)) {
    throw Error(ErrorCode::kParameter, "saturation must lie in [0,1]");
  }
  if (!(beta1 >= 0.0 && beta2 >= 0.0 && beta1 + beta2 <= 1.0)) {
    throw Error(ErrorCode::kParameter, "beta1, beta2 must be non-negative with beta1 + beta2 <= 1");
  }
  if (kernel_radius < 1) {
    throw Error(ErrorCode::kParameter, "kernel radius must be at least 1");
  }
}

Eigen::Vector3d hsiToRgb(const Hsi & hsi)
{
  double h = std::fmod(hsi.h, 360.0);
  if (h < 0) {
    h += 360.0;
  }
  const double s = hsi.s;
  const double i = hsi.i;
  double a{}, b{}, c{};  // (low, boosted, remainder) within the sector
  int sector = static_cast<int>(h / 120.0);
  sector = std::min(sector, 2);
  const double hh = (h - 120.0 * sector) * kDeg;
  a = i * (1.0 - s);
  b = i * (1.0 + s * std::cos(hh) / std::cos(60.0 * kDeg - hh));
  c = 3.0 * i - (a + b);
  Eigen::Vector3d rgb;
  switch (sector) {
    case 0: rgb = {b, c, a}; break;
    case 1: rgb = {a, b, c}; break;
    default: rgb = {c, a, b}; break;
  }
  return rgb.cwiseMax(0.0).cwiseMin(1.0);
}

Hsi rgbToHsi(const Eigen::Vector3d & rgb)
{
  const double r = rgb.x();
  const double g = rgb.y();
  const double b = rgb.z();
  Hsi out;
  const double sum = r + g + b;
  out.i = sum / 3.0;
  out.s = sum > 0.0 ? 1.0 - 3.0 * std::min({r, g, b}) / sum : 0.0;
  const double num = 0.5 * ((r - g) + (r - b));
  const double den = std::sqrt((r - g) * (r - g) + (r - b) * (g - b));
  if (den < 1e-12) {
    out.h = 0.0;
    return out;
  }
  const double theta = std::acos(std::clamp(num / den, -1.0, 1.0)) / kDeg;
  out.h = b <= g ? theta : 360.0 - theta;
  return out;
}

std::array<std::uint8_t, 256> equalizationTable(std::span<const std::uint32_t, 256> histogram)
{
  std::array<std::uint8_t, 256> lut{};
  std::uint64_t total = 0;
  for (auto c : histogram) {
    total += c;
  }
  std::uint64_t cdf_min = 0;
  for (auto c : histogram) {
    if (c > 0) {
      cdf_min = c;
      break;
    }
  }
  if (total == cdf_min) {
    return lut;
  }
  const double scale = 255.0 / static_cast<double>(total - cdf_min);
  std::uint64_t cdf = 0;
  for (std::size_t k = 0; k < 256; ++k) {
    cdf += histogram[k];
    const double v = cdf <= cdf_min ? 0.0 : static_cast<double>(cdf - cdf_min) * scale;
    lut[k] = static_cast<std::uint8_t>(std::lround(std::min(255.0, v)));
  }
  return lut;
}

std::vector<double> voxelHues(const aggregation::VoxelGrid & grid)
{
  std::array<std::uint32_t, 256> hist{};
  std::vector<std::uint8_t> level(grid.size());
  for (aggregation::VoxelId id = 0; id < grid.size(); ++id) {
    level[id] = quantize(grid[id].mean_intensity);
    ++hist[level[id]];
  }
  const auto lut = equalizationTable(hist);
  std::vector<double> hues(grid.size());
  for (std::size_t id = 0; id < hues.size(); ++id) {
    hues[id] = lut[level[id]] * 360.0 / 256.0;
  }
  return hues;
}

std::vector<float> depthEdgeResponse(const PixelVoxelMap & map, int kernel_radius)
{
  std::vector<float> edge(map.voxel.size(), 0.0f);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const std::size_t i = map.index(x, y);
      if (!map.mapped(i)) {
        continue;
      }
      float best = 0.0f;
      for (int dy = -kernel_radius; dy <= kernel_radius; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= map.height) {
          continue;
        }
        for (int dx = -kernel_radius; dx <= kernel_radius; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= map.width || (dx == 0 && dy == 0)) {
            continue;
          }
          const std::size_t j = map.index(xx, yy);
          if (map.mapped(j)) {
            best = std::max(best, std::abs(map.depth[i] - map.depth[j]));
          }
        }
      }
      edge[i] = best;
    }
  }
  return edge;
}

void pseudoColor(PseudoImage & image, std::span<const double> voxel_hues, const PseudoColorParams & params)
{
  params.validate();
  const PixelVoxelMap & map = image.map;
  const std::vector<float> edge = depthEdgeResponse(map, params.kernel_radius);

  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < edge.size(); ++i) {
    if (map.mapped(i)) {
      lo = std::min(lo, edge[i]);
      hi = std::max(hi, edge[i]);
    }
  }
  std::vector<std::uint8_t> level(edge.size(), 0);
  std::array<std::uint32_t, 256> hist{};
  for (std::size_t i = 0; i < edge.size(); ++i) {
    if (!map.mapped(i)) {
      continue;
    }
    level[i] = hi > lo ? quantize((edge[i] - lo) / (hi - lo)) : 0;
    ++hist[level[i]];
  }
  const auto lut = equalizationTable(hist);

  image.rgb = RgbImage(map.width, map.height);
  for (std::size_t i = 0; i < edge.size(); ++i) {
    if (!map.mapped(i)) {
      continue;
    }
    const double intensity = params.beta1 + params.beta2 * (lut[level[i]] / 255.0);
    const Eigen::Vector3d rgb = hsiToRgb({voxel_hues[static_cast<std::size_t>(map.voxel[i])], params.saturation, intensity});
    std::uint8_t * px = &image.rgb.pixels[i * 3];
    px[0] = quantize(rgb.x());
    px[1] = quantize(rgb.y());
    px[2] = quantize(rgb.z());
  }
}

}  // namespace preseg::alignment
