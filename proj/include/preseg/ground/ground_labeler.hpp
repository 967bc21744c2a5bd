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

#ifndef PRESEG__GROUND__GROUND_LABELER_HPP_
#define PRESEG__GROUND__GROUND_LABELER_HPP_

#include "preseg/data/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace preseg::ground
{

/// A ground point in its own scan's sensor frame.
struct GroundPoint
{
  Eigen::Vector3f position;
  float intensity{};
  std::uint32_t frame{};
  std::uint32_t index{};
};

struct GroundCell
{
  Eigen::Vector2i key;
  std::vector<std::uint32_t> members;  // indices into the rasterized input
  std::vector<double> samples;         // normalized intensities of the members
};

struct CellKeyHash
{
  std::size_t operator()(const Eigen::Vector2i & k) const noexcept
  {
    return static_cast<std::size_t>(
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x())) * 73856093ull ^
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y())) * 19349663ull);
  }
};

struct GroundGrid
{
  double cell{0.2};
  std::vector<GroundCell> cells;  // sorted by key (x, then y)
  std::unordered_map<Eigen::Vector2i, std::size_t, CellKeyHash> index;
  std::vector<std::uint32_t> cell_of_point;  // per input point
};

/// Bins points into world-frame XY cells (floor rule). Intensities are
/// min-max normalized over the whole input.
GroundGrid rasterizeGround(std::span<const GroundPoint> points, std::span<const data::Pose> poses, double cell);

/// Per cell, the B-bin histogram of all samples in the (2w+1)^2 window of
/// cells around it, normalized to sum 1. Bin of v is floor(v * B), clamped.
std::vector<Eigen::VectorXd> cellFeatures(const GroundGrid & grid, int window, int bins);

struct FcmParams
{
  int clusters{8};
  double fuzzifier{2.0};
  double tolerance{1e-4};
  int max_iterations{300};
  std::uint64_t seed{0};
};

struct FuzzyPartition
{
  Eigen::MatrixXd centers;     // clusters x dims
  Eigen::MatrixXd membership;  // samples x clusters, rows sum to 1
  std::vector<int> labels;     // argmax membership, first on ties
  std::vector<double> objective;  // J_m after each membership update
  int iterations{};
};

/// Alternating fuzzy c-means with k-means++ seeding. A sample lying on one
/// or more centers splits its membership equally among them. Throws
/// Error(kParameter) when there are fewer samples than clusters.
FuzzyPartition fuzzyCmeans(std::span<const Eigen::VectorXd> features, const FcmParams & params);

}  // namespace preseg::ground

#endif  // PRESEG__GROUND__GROUND_LABELER_HPP_
