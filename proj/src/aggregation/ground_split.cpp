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

#include "preseg/aggregation/ground_split.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace preseg::aggregation
{

namespace
{

struct CellKey
{
  std::int32_t x;
  std::int32_t y;
  bool operator<(const CellKey & o) const { return x != o.x ? x < o.x : y < o.y; }
};

struct Candidate
{
  PlaneFit plane;
  double height_at_center{};
  const std::vector<std::uint32_t> * members{};
};

std::optional<PlaneFit> fitSeedPlane(
  const Superframe & sf, const std::vector<std::uint32_t> & members, const GroundSplitParams & params,
  bool ceiling)
{
  if (members.size() < 3) {
    return std::nullopt;
  }
  float extreme = sf.points[members.front()].position.z();
  for (auto i : members) {
    const float z = sf.points[i].position.z();
    extreme = ceiling ? std::max(extreme, z) : std::min(extreme, z);
  }
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  std::vector<Eigen::Vector3d> seeds;
  for (auto i : members) {
    const Eigen::Vector3d p = sf.points[i].position.cast<double>();
    const double dz = ceiling ? extreme - p.z() : p.z() - extreme;
    if (dz <= params.seed_height) {
      seeds.push_back(p);
      mean += p;
    }
  }
  if (seeds.size() < 3) {
    return std::nullopt;
  }
  mean /= static_cast<double>(seeds.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto & p : seeds) {
    const Eigen::Vector3d d = p - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Eigen::Vector3d normal = eig.eigenvectors().col(0);
  if (normal.z() < 0) {
    normal = -normal;
  }
  const double tilt = std::acos(std::clamp(normal.z(), -1.0, 1.0));
  if (!(tilt <= params.normal_max_tilt)) {
    return std::nullopt;
  }
  PlaneFit fit;
  fit.normal = normal;
  fit.offset = -normal.dot(mean);
  fit.ceiling = ceiling;
  return fit;
}

double planeHeightAt(const PlaneFit & plane, double x, double y)
{
  return -(plane.offset + plane.normal.x() * x + plane.normal.y() * y) / plane.normal.z();
}

double median(std::vector<double> v)
{
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

GroundSplit splitGround(const Superframe & sf, const GroundSplitParams & params)
{
  GroundSplit out;
  if (sf.points.empty()) {
    return out;
  }
  std::map<CellKey, std::vector<std::uint32_t>> cells;
  for (std::uint32_t i = 0; i < sf.points.size(); ++i) {
    const auto & p = sf.points[i].position;
    cells[{static_cast<std::int32_t>(std::floor(p.x() / params.cell)),
           static_cast<std::int32_t>(std::floor(p.y() / params.cell))}]
      .push_back(i);
  }

  std::vector<std::uint8_t> is_ground(sf.points.size(), 0);
  for (const bool ceiling : {false, true}) {
    if (ceiling && !params.ceiling) {
      continue;
    }
    std::vector<Candidate> candidates;
    for (const auto & [key, members] : cells) {
      auto fit = fitSeedPlane(sf, members, params, ceiling);
      if (!fit) {
        continue;
      }
      fit->cell = {key.x, key.y};
      const double cx = (key.x + 0.5) * params.cell;
      const double cy = (key.y + 0.5) * params.cell;
      candidates.push_back({*fit, planeHeightAt(*fit, cx, cy), &members});
    }
    if (candidates.empty()) {
      continue;
    }
    std::vector<double> heights;
    heights.reserve(candidates.size());
    for (const auto & c : candidates) {
      heights.push_back(c.height_at_center);
    }
    const double reference = median(std::move(heights));
    for (const auto & c : candidates) {
      if (std::abs(c.height_at_center - reference) > params.height_gate) {
        continue;
      }
      for (auto i : *c.members) {
        const double d = c.plane.normal.dot(sf.points[i].position.cast<double>()) + c.plane.offset;
        if (std::abs(d) <= params.plane_tol) {
          is_ground[i] = 1;
        }
      }
      out.planes.push_back(c.plane);
    }
  }

  for (std::uint32_t i = 0; i < sf.points.size(); ++i) {
    (is_ground[i] ? out.ground : out.object).push_back(i);
  }
  return out;
}

}  // namespace preseg::aggregation
