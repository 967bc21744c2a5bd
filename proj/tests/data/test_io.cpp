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

#include "preseg/common/error.hpp"
#include "preseg/data/io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

namespace
{

using namespace preseg;
using namespace preseg::data;

std::vector<std::byte> floatBytes(std::initializer_list<float> values)
{
  std::vector<std::byte> out(values.size() * 4);
  std::size_t i = 0;
  for (float v : values) {
    std::memcpy(out.data() + 4 * i++, &v, 4);
  }
  return out;
}

class TempDir : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = std::filesystem::temp_directory_path() /
           ("preseg_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST(PointFrameIo, ParsesTwoPoints)
{
  const auto bytes = floatBytes({1, 2, 3, 0.5f, 4, 5, 6, 0.25f});
  const PointFrame f = parsePointFrame(bytes, 7);
  ASSERT_EQ(f.points.size(), 2u);
  EXPECT_EQ(f.frame_index, 7u);
  EXPECT_EQ(f.points[0], (Point{1, 2, 3, 0.5f}));
  EXPECT_EQ(f.points[1], (Point{4, 5, 6, 0.25f}));
}

TEST(PointFrameIo, EmptyIsZeroPoints)
{
  EXPECT_TRUE(parsePointFrame({}).points.empty());
}

TEST(PointFrameIo, RejectsTruncatedRecord)
{
  std::vector<std::byte> bytes(33);
  try {
    parsePointFrame(bytes);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedFile);
  }
}

TEST(PointFrameIo, NonFiniteValueReportsIndex)
{
  const auto bytes = floatBytes({0, 0, 0, 0, 1, std::numeric_limits<float>::quiet_NaN(), 0, 0});
  try {
    parsePointFrame(bytes);
    FAIL();
  } catch (const RecordError & e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptRecord);
    EXPECT_EQ(e.record(), 1u);
  }
}

TEST(PointFrameIo, ArbitraryBytesNeverCrash)
{
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::byte> bytes(rng() % 80);
    for (auto & b : bytes) {
      b = static_cast<std::byte>(rng());
    }
    try {
      const auto f = parsePointFrame(bytes);
      EXPECT_EQ(f.points.size() * 16, bytes.size());
    } catch (const Error &) {
    }
  }
}

TEST(PoseIo, IdentityLine)
{
  const auto poses = parsePoses("1 0 0 0 0 1 0 0 0 0 1 0\n");
  ASSERT_EQ(poses.size(), 1u);
  EXPECT_TRUE(poses[0].matrix().isIdentity(0));
}

TEST(PoseIo, TwoIdentityLines)
{
  const auto poses = parsePoses("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 0 0 1 0 0 0 0 1 0\n");
  ASSERT_EQ(poses.size(), 2u);
  EXPECT_EQ(poses[0].matrix(), poses[1].matrix());
}

TEST(PoseIo, ElevenNumbersIsParseErrorOnLineOne)
{
  try {
    parsePoses("1 0 0 0 0 1 0 0 0 0 1\n");
    FAIL();
  } catch (const RecordError & e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.record(), 1u);
  }
}

TEST(PoseIo, SlightlySkewedRotationIsRepaired)
{
  const auto poses = parsePoses("1.0004 0 0 5 0 1 0 6 0 0 1 7\n");
  ASSERT_EQ(poses.size(), 1u);
  const Eigen::Matrix3d r = poses[0].rotation();
  EXPECT_NEAR((r.transpose() * r - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(poses[0].translation().x(), 5.0);
}

TEST(PoseIo, GrosslySkewedRotationIsRejected)
{
  try {
    parsePoses("1.1 0 0 0 0 1 0 0 0 0 1 0\n");
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidPose);
  }
}

TEST(PoseIo, GarbageTextNeverCrashes)
{
  std::mt19937 rng(5);
  const std::string alphabet = "0123456789 .-e\nx";
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto n = rng() % 120;
    for (unsigned i = 0; i < n; ++i) {
      text.push_back(alphabet[rng() % alphabet.size()]);
    }
    try {
      parsePoses(text);
    } catch (const Error &) {
    }
  }
}

TEST_F(TempDir, PoseRoundTrip)
{
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Pose> poses;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Matrix3d r = Eigen::AngleAxisd(u(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized())
                                .toRotationMatrix();
    poses.push_back(Pose::fromRotationTranslation(r, {u(rng), u(rng), u(rng)}));
  }
  writePoseFile(poses, dir_ / "poses.txt");
  const auto back = readPoseFile(dir_ / "poses.txt");
  ASSERT_EQ(back.size(), poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_LT((back[i].matrix() - poses[i].matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LabelIo, PacksSemanticLowInstanceHigh)
{
  EXPECT_EQ((Label{10, 3}).packed(), 196618u);
  EXPECT_EQ((Label{0, 0}).packed(), 0u);
  EXPECT_TRUE(Label::unpack(0).unlabeled());
}

TEST(LabelIo, RejectsPartialWord)
{
  std::vector<std::byte> bytes(6);
  try {
    parseLabels(bytes);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedFile);
  }
}

TEST_F(TempDir, LabelRoundTripIsBitExact)
{
  std::mt19937 rng(1);
  FrameLabels labels(1000);
  for (auto & l : labels) {
    l = Label::unpack(static_cast<std::uint32_t>(rng()));
  }
  const auto path = dir_ / "000000.label";
  writeLabelFile(labels, path);
  EXPECT_EQ(readLabelFile(path), labels);
  EXPECT_EQ(std::filesystem::file_size(path), 4000u);
  const auto raw = readBytes(path);
  std::uint32_t first = 0;
  std::memcpy(&first, raw.data(), 4);
  EXPECT_EQ(first, labels[0].packed());
}

TEST_F(TempDir, PointFrameRoundTrip)
{
  PointFrame f;
  f.points = {{1, 2, 3, 4}, {-1.5f, 0.25f, 9, 0}};
  writePointFrame(f, dir_ / "a.bin");
  EXPECT_EQ(readPointFrame(dir_ / "a.bin").points, f.points);
}

TEST_F(TempDir, AtomicWriteLeavesNoTempFiles)
{
  writeFileAtomic(dir_ / "x.txt", std::string_view("hello"));
  writeFileAtomic(dir_ / "x.txt", std::string_view("world"));
  std::size_t count = 0;
  for ([[maybe_unused]] const auto & e : std::filesystem::directory_iterator(dir_)) {
    ++count;
  }
  EXPECT_EQ(count, 1u);
  std::ifstream in(dir_ / "x.txt");
  std::string s;
  in >> s;
  EXPECT_EQ(s, "world");
}

TEST_F(TempDir, ManifestRoundTripResolvesRelativePaths)
{
  SequenceManifest m;
  m.frame_paths = {"frames/000000.bin", "frames/000001.bin"};
  m.pose_path = "poses.txt";
  m.timestamps = std::vector<double>{0.0, 0.1};
  writeManifest(m, dir_ / "seq.json");
  const auto back = readManifest(dir_ / "seq.json");
  ASSERT_EQ(back.frame_paths.size(), 2u);
  EXPECT_EQ(std::filesystem::path(back.frame_paths[1]), dir_ / "frames/000001.bin");
  EXPECT_EQ(std::filesystem::path(back.pose_path), dir_ / "poses.txt");
  ASSERT_TRUE(back.timestamps.has_value());
  EXPECT_DOUBLE_EQ((*back.timestamps)[1], 0.1);
}

TEST(ReadBytes, MissingFileIsIoError)
{
  try {
    readBytes("/nonexistent/preseg/file.bin");
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
