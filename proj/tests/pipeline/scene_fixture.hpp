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

#ifndef PRESEG__TESTS__PIPELINE__SCENE_FIXTURE_HPP_
#define PRESEG__TESTS__PIPELINE__SCENE_FIXTURE_HPP_

#include "preseg/pipeline/synthetic_scene.hpp"

#include <filesystem>
#include <string>
#include <unistd.h>

namespace preseg::test
{

inline std::filesystem::path scratchDir(const std::string & tag)
{
  auto dir = std::filesystem::temp_directory_path() / ("preseg_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Short synthetic drive: long enough for three keyframes, fast enough for unit tests.
inline pipeline::SyntheticScene shortScene(std::uint32_t frames = 12)
{
  auto params = pipeline::SyntheticSceneParams::standard();
  params.frames = frames;
  params.beams = 32;
  params.azimuth_steps = 360;
  return pipeline::makeSyntheticScene(params);
}

}  // namespace preseg::test

#endif  // PRESEG__TESTS__PIPELINE__SCENE_FIXTURE_HPP_
