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

#include "preseg/segmenter/rle.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>

namespace preseg::segmenter
{

std::size_t Bitmask::count() const
{
  return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

Rle encodeRle(const Bitmask & mask)
{
  Rle rle{mask.width, mask.height, {}};
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (const auto b : mask.bits) {
    const std::uint8_t v = b != 0 ? 1 : 0;
    if (v != current) {
      rle.counts.push_back(run);
      run = 0;
      current = v;
    }
    ++run;
  }
  rle.counts.push_back(run);
  return rle;
}

Bitmask decodeRle(const Rle & rle)
{
  if (rle.width < 0 || rle.height < 0) {
    throw Error(ErrorCode::kProtocol, "negative mask dimensions");
  }
  const auto total = static_cast<std::uint64_t>(rle.width) * static_cast<std::uint64_t>(rle.height);
  std::uint64_t sum = 0;
  for (const auto c : rle.counts) {
    sum += c;
  }
  if (sum != total) {
    throw Error(
      ErrorCode::kProtocol, "run lengths sum to " + std::to_string(sum) + ", expected " + std::to_string(total));
  }
  Bitmask mask(rle.width, rle.height);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (const auto c : rle.counts) {
    std::fill_n(mask.bits.begin() + static_cast<std::ptrdiff_t>(pos), c, value);
    pos += c;
    value ^= 1;
  }
  return mask;
}

}  // namespace preseg::segmenter
