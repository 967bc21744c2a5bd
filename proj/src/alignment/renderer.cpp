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

#include "preseg/alignment/renderer.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>

namespace preseg::alignment
{

namespace
{

constexpr double kNearPlane = 1e-3;
constexpr double kOverlapEps = 1e-9;

using Vec2 = Eigen::Vector2d;

double cross(const Vec2 & o, const Vec2 & a, const Vec2 & b)
{
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain; counter-clockwise in a y-up sense, no collinear points.
int convexHull(std::array<Vec2, 8> & pts, std::array<Vec2, 16> & hull)
{
  std::sort(pts.begin(), pts.end(), [](const Vec2 & a, const Vec2 & b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  int k = 0;
  for (int i = 0; i < 8; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  for (int i = 6, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  return std::max(k - 1, 1);
}

struct Footprint
{
  std::array<Vec2, 16> hull;
  int size{};
  double min_x{}, max_x{}, min_y{}, max_y{};
  double depth{};
};

// Returns false when the voxel cannot be drawn (near-plane crossing).
bool buildFootprint(
  const aggregation::VoxelGrid & grid, aggregation::VoxelId id, const Camera & cam, ProjectionCounter * counter,
  Footprint & fp)
{
  std::array<Vec2, 8> pts;
  bool ok = true;
  for (int c = 0; c < 8; ++c) {
    const Eigen::Vector3d pc = cam.toCamera(grid.corner(id, c));
    if (pc.z() <= kNearPlane) {
      ok = false;
      continue;
    }
    pts[static_cast<std::size_t>(c)] = {cam.intrinsics.fx * pc.x() / pc.z() + cam.intrinsics.cx,
                                        cam.intrinsics.fy * pc.y() / pc.z() + cam.intrinsics.cy};
  }
  if (counter != nullptr) {
    counter->corners.fetch_add(8, std::memory_order_relaxed);
  }
  if (!ok) {
    return false;
  }
  fp.depth = cam.toCamera(grid[id].center).z();
  fp.size = convexHull(pts, fp.hull);
  fp.min_x = fp.max_x = fp.hull[0].x();
  fp.min_y = fp.max_y = fp.hull[0].y();
  for (int i = 1; i < fp.size; ++i) {
    fp.min_x = std::min(fp.min_x, fp.hull[i].x());
    fp.max_x = std::max(fp.max_x, fp.hull[i].x());
    fp.min_y = std::min(fp.min_y, fp.hull[i].y());
    fp.max_y = std::max(fp.max_y, fp.hull[i].y());
  }
  return true;
}

// Separating-axis test between the hull and the unit pixel square at (px, py).
bool overlapsPixel(const Footprint & fp, int px, int py)
{
  const double x0 = px;
  const double y0 = py;
  if (fp.max_x <= x0 + kOverlapEps || fp.min_x >= x0 + 1 - kOverlapEps || fp.max_y <= y0 + kOverlapEps ||
      fp.min_y >= y0 + 1 - kOverlapEps)
  {
    return false;
  }
  if (fp.size < 3) {
    return true;
  }
  for (int i = 0; i < fp.size; ++i) {
    const Vec2 & a = fp.hull[i];
    const Vec2 & b = fp.hull[(i + 1) % fp.size];
    // Hull is counter-clockwise, so the outward normal is (dy, -dx).
    const Vec2 n(b.y() - a.y(), a.x() - b.x());
    const double limit = n.dot(a);
    const double sq_min = std::min({n.x() * x0 + n.y() * y0, n.x() * (x0 + 1) + n.y() * y0,
                                    n.x() * x0 + n.y() * (y0 + 1), n.x() * (x0 + 1) + n.y() * (y0 + 1)});
    if (sq_min >= limit - kOverlapEps * n.norm()) {
      return false;
    }
  }
  return true;
}

template <typename Fn>
void forEachCoveredPixel(const Footprint & fp, int width, int height, Fn && fn)
{
  const int x_begin = std::max(0, static_cast<int>(std::floor(fp.min_x)));
  const int x_end = std::min(width - 1, static_cast<int>(std::floor(fp.max_x)));
  const int y_begin = std::max(0, static_cast<int>(std::floor(fp.min_y)));
  const int y_end = std::min(height - 1, static_cast<int>(std::floor(fp.max_y)));
  for (int y = y_begin; y <= y_end; ++y) {
    for (int x = x_begin; x <= x_end; ++x) {
      if (overlapsPixel(fp, x, y)) {
        fn(x, y);
      }
    }
  }
}

}  // namespace

std::size_t PixelVoxelMap::mappedCount() const
{
  return static_cast<std::size_t>(std::count_if(voxel.begin(), voxel.end(), [](auto v) { return v != kEmpty; }));
}

PseudoImage projectVoxels(const aggregation::VoxelGrid & grid, const Camera & camera, ProjectionCounter * counter)
{
  const int w = camera.intrinsics.width;
  const int h = camera.intrinsics.height;
  PseudoImage img{PixelVoxelMap(w, h), RgbImage(w, h)};
  Footprint fp;
  for (aggregation::VoxelId id = 0; id < grid.size(); ++id) {
    if (!buildFootprint(grid, id, camera, counter, fp)) {
      continue;
    }
    if (fp.max_x < 0 || fp.min_x >= w || fp.max_y < 0 || fp.min_y >= h) {
      continue;
    }
    const auto depth = static_cast<float>(fp.depth);
    forEachCoveredPixel(fp, w, h, [&](int x, int y) {
      const std::size_t i = img.map.index(x, y);
      // Ties go to the smaller id, which was written first.
      if (depth < img.map.depth[i]) {
        img.map.depth[i] = depth;
        img.map.voxel[i] = static_cast<std::int32_t>(id);
      }
    });
  }
  return img;
}

std::vector<std::size_t> voxelFootprint(
  const aggregation::VoxelGrid & grid, aggregation::VoxelId id, const Camera & camera, ProjectionCounter * counter)
{
  std::vector<std::size_t> pixels;
  Footprint fp;
  if (!buildFootprint(grid, id, camera, counter, fp)) {
    return pixels;
  }
  const int w = camera.intrinsics.width;
  forEachCoveredPixel(fp, w, camera.intrinsics.height, [&](int x, int y) {
    pixels.push_back(static_cast<std::size_t>(y) * w + x);
  });
  return pixels;
}

}  // namespace preseg::alignment
