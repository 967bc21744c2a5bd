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

#ifndef PRESEG__ALIGNMENT__PSEUDO_COLOR_HPP_
#define PRESEG__ALIGNMENT__PSEUDO_COLOR_HPP_

#include "preseg/aggregation/voxel_grid.hpp"
#include "preseg/alignment/renderer.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace preseg::alignment
{

struct PseudoColorParams
{
  double saturation{0.6};
  double beta1{0.25};  // intensity floor
  double beta2{0.15};  // weight of the equalized depth-edge response
  int kernel_radius{1};

  void validate() const;
};

/// Hue in degrees [0,360), saturation and intensity in [0,1].
struct Hsi
{
  double h{};
  double s{};
  double i{};
};

/// Three-sector HSI -> RGB; channels clamped to [0,1].
Eigen::Vector3d hsiToRgb(const Hsi & hsi);
Hsi rgbToHsi(const Eigen::Vector3d & rgb);

/// Histogram equalization of 8-bit levels: level k maps to
/// round(255 * (cdf(k) - cdf_min) / (n - cdf_min)); all zeros when every
/// sample falls in one level.
std::array<std::uint8_t, 256> equalizationTable(std::span<const std::uint32_t, 256> histogram);

/// Per-voxel hue in degrees from equalized intensity levels over the grid.
std::vector<double> voxelHues(const aggregation::VoxelGrid & grid);

/// Max absolute depth difference to mapped neighbors inside the kernel window;
/// zero for unmapped pixels.
std::vector<float> depthEdgeResponse(const PixelVoxelMap & map, int kernel_radius);

/// Fills `image.rgb`: hue from voxel intensity, fixed saturation, intensity
/// beta1 + beta2 * equalized edge response. Unmapped pixels stay black.
void pseudoColor(PseudoImage & image, std::span<const double> voxel_hues, const PseudoColorParams & params);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__PSEUDO_COLOR_HPP_
