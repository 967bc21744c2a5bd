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

#ifndef PRESEG__SEGMENTER__RLE_HPP_
#define PRESEG__SEGMENTER__RLE_HPP_

#include <cstdint>
#include <vector>

namespace preseg::segmenter
{

/// Row-major binary mask, one byte per pixel (0 or 1).
struct Bitmask
{
  int width{};
  int height{};
  std::vector<std::uint8_t> bits;

  Bitmask() = default;
  Bitmask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
  bool operator==(const Bitmask &) const = default;
};

/// Run lengths over the row-major raster, alternating background and
/// foreground and always starting with background (possibly a zero run).
struct Rle
{
  int width{};
  int height{};
  std::vector<std::uint32_t> counts;
  bool operator==(const Rle &) const = default;
};

Rle encodeRle(const Bitmask & mask);
/// Throws Error(kProtocol) when the counts do not sum to width * height.
Bitmask decodeRle(const Rle & rle);

}  // namespace preseg::segmenter

#endif  // PRESEG__SEGMENTER__RLE_HPP_
