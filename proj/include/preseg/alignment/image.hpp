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

#ifndef PRESEG__ALIGNMENT__IMAGE_HPP_
#define PRESEG__ALIGNMENT__IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace preseg::alignment
{

/// Single channel raster, row-major, nominal range [0,1].
struct GrayImage
{
  int width{};
  int height{};
  std::vector<float> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
  float & at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool empty() const { return pixels.empty(); }
};

/// Interleaved 8-bit RGB, row-major.
struct RgbImage
{
  int width{};
  int height{};
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}
  std::uint8_t * at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t * at(int x, int y) const { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  bool operator==(const RgbImage &) const = default;
};

GrayImage toGray(const RgbImage & rgb);
RgbImage toRgb(const GrayImage & gray);
/// Center crop; returns an empty image when the source is smaller than requested.
GrayImage centerCrop(const GrayImage & img, int width, int height);

std::vector<std::uint8_t> encodePng(const RgbImage & img);
RgbImage decodePng(std::span<const std::uint8_t> bytes);
void writePng(const RgbImage & img, const std::filesystem::path & path);
RgbImage readPng(const std::filesystem::path & path);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__IMAGE_HPP_
