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

#ifndef PRESEG__ALIGNMENT__DEAD_LEAVES_HPP_
#define PRESEG__ALIGNMENT__DEAD_LEAVES_HPP_

#include "preseg/alignment/image.hpp"

#include <cstdint>
#include <vector>

namespace preseg::alignment
{

/// Dead-leaves texture: occluding disks with power-law radii and random gray
/// levels. Its spectrum falls off like natural photographs, which makes it a
/// usable reference corpus when no real images are at hand.
GrayImage deadLeaves(int width, int height, std::uint64_t seed, int disks = 3000);

std::vector<GrayImage> deadLeavesCorpus(int count, int width, int height, std::uint64_t seed);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__DEAD_LEAVES_HPP_
