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

#ifndef PRESEG__DATA__IO_HPP_
#define PRESEG__DATA__IO_HPP_

#include "preseg/data/types.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace preseg::data
{

namespace fs = std::filesystem;

// KITTI point layout: consecutive little-endian float32 x, y, z, intensity.
PointFrame parsePointFrame(std::span<const std::byte> bytes, std::uint32_t frame_index = 0);
PointFrame readPointFrame(const fs::path & path, std::uint32_t frame_index = 0);
void writePointFrame(const PointFrame & frame, const fs::path & path);

// One pose per line, 12 numbers, row-major 3x4.
std::vector<Pose> parsePoses(std::string_view text);
std::vector<Pose> readPoseFile(const fs::path & path);
void writePoseFile(const std::vector<Pose> & poses, const fs::path & path);

// One little-endian uint32 per point.
FrameLabels parseLabels(std::span<const std::byte> bytes);
FrameLabels readLabelFile(const fs::path & path);
void writeLabelFile(const FrameLabels & labels, const fs::path & path);

/// Relative paths inside the manifest are resolved against the manifest's directory.
SequenceManifest readManifest(const fs::path & path);
void writeManifest(const SequenceManifest & manifest, const fs::path & path);

std::vector<std::byte> readBytes(const fs::path & path);
/// Whole-file atomic write: writes a sibling temp file then renames it over `path`.
void writeFileAtomic(const fs::path & path, std::span<const std::byte> bytes);
void writeFileAtomic(const fs::path & path, std::string_view text);

}  // namespace preseg::data

#endif  // PRESEG__DATA__IO_HPP_
