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

#include "preseg/ground/ground_labeler.hpp"

#include "preseg/common/error.hpp"
#include "preseg/common/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <tuple>

namespace preseg::ground
{

GroundGrid rasterizeGround(std::span<const GroundPoint> points, std::span<const data::Pose> poses, double cell)
{
  if (!(cell > 0.0)) {
    throw Error(ErrorCode::kParameter, "ground cell size must be positive");
  }
  GroundGrid grid;
  grid.cell = cell;
  if (points.empty()) {
    return grid;
  }
  float lo = points.front().intensity;
  float hi = lo;
  for (const auto & p : points) {
    lo = std::min(lo, p.intensity);
    hi = std::max(hi, p.intensity);
  }
  const double range = static_cast<double>(hi) - lo;

  auto less = [](const Eigen::Vector2i & a, const Eigen::Vector2i & b) {
    return std::tie(a.x(), a.y()) < std::tie(b.x(), b.y());
  };
  std::map<Eigen::Vector2i, std::vector<std::uint32_t>, decltype(less)> bins(less);
  std::vector<Eigen::Vector2i> keys(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    const auto & p = points[i];
    if (p.frame >= poses.size()) {
      throw Error(ErrorCode::kRange, "ground point refers to frame " + std::to_string(p.frame) + " without a pose");
    }
    const Eigen::Vector3d w = poses[p.frame].apply(p.position.cast<double>());
    keys[i] = {static_cast<int>(std::floor(w.x() / cell)), static_cast<int>(std::floor(w.y() / cell))};
    bins[keys[i]].push_back(i);
  }
  grid.cells.reserve(bins.size());
  for (auto & [key, members] : bins) {
    GroundCell c;
    c.key = key;
    for (auto m : members) {
      c.samples.push_back(range > 0.0 ? (points[m].intensity - lo) / range : 0.0);
    }
    c.members = std::move(members);
    grid.index.emplace(key, grid.cells.size());
    grid.cells.push_back(std::move(c));
  }
  grid.cell_of_point.resize(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    grid.cell_of_point[i] = static_cast<std::uint32_t>(grid.index.at(keys[i]));
  }
  return grid;
}

std::vector<Eigen::VectorXd> cellFeatures(const GroundGrid & grid, int window, int bins)
{
  if (window < 0 || bins < 1) {
    throw Error(ErrorCode::kParameter, "window must be >= 0 and bins >= 1");
  }
  std::vector<Eigen::VectorXd> out(grid.cells.size());
  parallelFor(grid.cells.size(), [&](std::size_t i) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(bins);
    const Eigen::Vector2i k = grid.cells[i].key;
    for (int dx = -window; dx <= window; ++dx) {
      for (int dy = -window; dy <= window; ++dy) {
        const auto it = grid.index.find(k + Eigen::Vector2i(dx, dy));
        if (it == grid.index.end()) {
          continue;
        }
        for (double v : grid.cells[it->second].samples) {
          h[std::clamp(static_cast<int>(std::floor(v * bins)), 0, bins - 1)] += 1.0;
        }
      }
    }
    const double total = h.sum();
    out[i] = total > 0.0 ? Eigen::VectorXd(h / total) : h;
  });
  return out;
}

namespace
{

Eigen::MatrixXd seedCenters(const Eigen::MatrixXd & x, int c, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const auto n = x.rows();
  Eigen::MatrixXd centers(c, x.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = x.row(first(rng));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < c; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      for (pick = 0; pick < n - 1; ++pick) {
        r -= d2[pick];
        if (r < 0.0) {
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    centers.row(k) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

FuzzyPartition fuzzyCmeans(std::span<const Eigen::VectorXd> features, const FcmParams & params)
{
  const int c = params.clusters;
  if (c < 1 || static_cast<std::size_t>(c) > features.size()) {
    throw Error(
      ErrorCode::kParameter,
      "fuzzy c-means needs at least " + std::to_string(c) + " samples, got " + std::to_string(features.size()));
  }
  if (!(params.fuzzifier > 1.0)) {
    throw Error(ErrorCode::kParameter, "fuzzifier must exceed 1");
  }
  const auto n = static_cast<Eigen::Index>(features.size());
  const auto dims = features.front().size();
  Eigen::MatrixXd x(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (features[static_cast<std::size_t>(i)].size() != dims) {
      throw Error(ErrorCode::kDimensionMismatch, "features have mixed dimensions");
    }
    x.row(i) = features[static_cast<std::size_t>(i)].transpose();
  }

  FuzzyPartition out;
  out.centers = seedCenters(x, c, params.seed);
  out.membership = Eigen::MatrixXd::Zero(n, c);
  const double m = params.fuzzifier;
  const double exponent = 1.0 / (m - 1.0);  // on squared distances: (d^2)^(1/(m-1)) = d^(2/(m-1))

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    Eigen::MatrixXd d2(n, c);
    for (int k = 0; k < c; ++k) {
      d2.col(k) = (x.rowwise() - out.centers.row(k)).rowwise().squaredNorm();
    }
    Eigen::MatrixXd u(n, c);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int zeros = static_cast<int>((d2.row(i).array() == 0.0).count());
      if (zeros > 0) {
        for (int k = 0; k < c; ++k) {
          u(i, k) = d2(i, k) == 0.0 ? 1.0 / zeros : 0.0;
        }
        continue;
      }
      // u_ik = 1 / sum_j (d_ik / d_ij)^(2/(m-1)), computed on inverse powers
      // to stay finite for large ratios.
      Eigen::RowVectorXd inv(c);
      for (int k = 0; k < c; ++k) {
        inv[k] = std::pow(d2(i, k), -exponent);
      }
      u.row(i) = inv / inv.sum();
    }
    const double delta = iter == 0 ? std::numeric_limits<double>::infinity()
                                   : (u - out.membership).cwiseAbs().maxCoeff();
    out.membership = u;
    const Eigen::MatrixXd um = u.array().pow(m).matrix();
    out.objective.push_back((um.array() * d2.array()).sum());
    out.iterations = iter + 1;
    if (delta < params.tolerance) {
      break;
    }
    const Eigen::VectorXd weight = um.colwise().sum().transpose();
    const Eigen::MatrixXd numer = um.transpose() * x;
    for (int k = 0; k < c; ++k) {
      if (weight[k] > 0.0) {
        out.centers.row(k) = numer.row(k) / weight[k];
      }
    }
  }
  out.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    out.membership.row(i).maxCoeff(&best);
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace preseg::ground
