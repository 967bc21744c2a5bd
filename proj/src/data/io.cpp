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

#include "preseg/data/io.hpp"

#include "preseg/common/error.hpp"

#include <json.hpp>

#include <Eigen/SVD>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace preseg::data
{

namespace
{

constexpr std::size_t kPointStride = 16;
constexpr double kReorthonormalizeTolerance = 1e-3;

static_assert(std::endian::native == std::endian::little, "on-disk formats assume a little-endian host");

float loadFloat(const std::byte * p)
{
  float v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

std::uint32_t loadU32(const std::byte * p)
{
  std::uint32_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

Eigen::Matrix3d nearestRotation(const Eigen::Matrix3d & r)
{
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

PointFrame parsePointFrame(std::span<const std::byte> bytes, std::uint32_t frame_index)
{
  if (bytes.size() % kPointStride != 0) {
    throw Error(
      ErrorCode::kMalformedFile,
      "point file length " + std::to_string(bytes.size()) + " is not a multiple of 16");
  }
  PointFrame frame;
  frame.frame_index = frame_index;
  const std::size_t n = bytes.size() / kPointStride;
  frame.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::byte * rec = bytes.data() + i * kPointStride;
    Point & p = frame.points[i];
    p.x = loadFloat(rec);
    p.y = loadFloat(rec + 4);
    p.z = loadFloat(rec + 8);
    p.intensity = loadFloat(rec + 12);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) || !std::isfinite(p.intensity)) {
      throw RecordError(ErrorCode::kCorruptRecord, i, "non-finite point value");
    }
  }
  return frame;
}

PointFrame readPointFrame(const fs::path & path, std::uint32_t frame_index)
{
  const auto bytes = readBytes(path);
  return parsePointFrame(bytes, frame_index);
}

void writePointFrame(const PointFrame & frame, const fs::path & path)
{
  std::vector<std::byte> bytes(frame.points.size() * kPointStride);
  for (std::size_t i = 0; i < frame.points.size(); ++i) {
    const Point & p = frame.points[i];
    const float v[4] = {p.x, p.y, p.z, p.intensity};
    std::memcpy(bytes.data() + i * kPointStride, v, kPointStride);
  }
  writeFileAtomic(path, bytes);
}

std::vector<Pose> parsePoses(std::string_view text)
{
  std::vector<Pose> poses;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    std::vector<double> values;
    const char * p = line.data();
    const char * end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) {
        ++p;
      }
      if (p == end) {
        break;
      }
      double v{};
      if (*p == '+') {
        ++p;
      }
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t')) {
        throw RecordError(ErrorCode::kParse, line_no, "unparseable number in pose line");
      }
      values.push_back(v);
      p = next;
    }
    if (values.size() != 12) {
      throw RecordError(
        ErrorCode::kParse, line_no, "expected 12 numbers, got " + std::to_string(values.size()));
    }
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        m(r, c) = values[static_cast<std::size_t>(r * 4 + c)];
      }
    }
    if (!m.allFinite()) {
      throw RecordError(ErrorCode::kInvalidPose, line_no, "non-finite pose entry");
    }
    const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
    const double err = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (err > kReorthonormalizeTolerance || r.determinant() <= 0.0) {
      throw RecordError(ErrorCode::kInvalidPose, line_no, "rotation is not orthonormal");
    }
    m.topLeftCorner<3, 3>() = nearestRotation(r);
    poses.emplace_back(m);
  }
  return poses;
}

std::vector<Pose> readPoseFile(const fs::path & path)
{
  const auto bytes = readBytes(path);
  return parsePoses(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

void writePoseFile(const std::vector<Pose> & poses, const fs::path & path)
{
  std::ostringstream out;
  out.precision(17);
  for (const auto & pose : poses) {
    const auto & m = pose.matrix();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        out << m(r, c) << (r == 2 && c == 3 ? '\n' : ' ');
      }
    }
  }
  writeFileAtomic(path, out.str());
}

FrameLabels parseLabels(std::span<const std::byte> bytes)
{
  if (bytes.size() % 4 != 0) {
    throw Error(
      ErrorCode::kMalformedFile,
      "label file length " + std::to_string(bytes.size()) + " is not a multiple of 4");
  }
  FrameLabels labels(bytes.size() / 4);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = Label::unpack(loadU32(bytes.data() + i * 4));
  }
  return labels;
}

FrameLabels readLabelFile(const fs::path & path)
{
  const auto bytes = readBytes(path);
  return parseLabels(bytes);
}

void writeLabelFile(const FrameLabels & labels, const fs::path & path)
{
  std::vector<std::byte> bytes(labels.size() * 4);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t w = labels[i].packed();
    std::memcpy(bytes.data() + i * 4, &w, 4);
  }
  writeFileAtomic(path, bytes);
}

SequenceManifest readManifest(const fs::path & path)
{
  const auto bytes = readBytes(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reinterpret_cast<const char *>(bytes.data()),
                              reinterpret_cast<const char *>(bytes.data()) + bytes.size());
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, "manifest " + path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string & p) {
    fs::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).lexically_normal().string();
  };
  SequenceManifest m;
  try {
    for (const auto & f : j.at("frames")) {
      m.frame_paths.push_back(resolve(f.get<std::string>()));
    }
    m.pose_path = resolve(j.at("poses").get<std::string>());
    m.sensor_count = j.value("sensor_count", 1u);
    if (j.contains("timestamps")) {
      m.timestamps = j.at("timestamps").get<std::vector<double>>();
      if (m.timestamps->size() != m.frame_paths.size()) {
        throw Error(ErrorCode::kParse, "timestamp count differs from frame count");
      }
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, "manifest " + path.string() + ": " + e.what());
  }
  return m;
}

void writeManifest(const SequenceManifest & manifest, const fs::path & path)
{
  const fs::path base = fs::absolute(path).parent_path();
  auto relative = [&](const std::string & p) {
    const fs::path fp(p);
    return fp.is_absolute() ? fp.lexically_relative(base).string() : fp.string();
  };
  nlohmann::json j;
  j["frames"] = nlohmann::json::array();
  for (const auto & f : manifest.frame_paths) {
    j["frames"].push_back(relative(f));
  }
  j["poses"] = relative(manifest.pose_path);
  j["sensor_count"] = manifest.sensor_count;
  if (manifest.timestamps) {
    j["timestamps"] = *manifest.timestamps;
  }
  writeFileAtomic(path, j.dump(2) + "\n");
}

std::vector<std::byte> readBytes(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> bytes(size);
  in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in && size > 0) {
    throw Error(ErrorCode::kIo, "short read on " + path.string());
  }
  return bytes;
}

void writeFileAtomic(const fs::path & path, std::span<const std::byte> bytes)
{
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rng() & 0xFFFFFFu);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorCode::kIo, "write failed on " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void writeFileAtomic(const fs::path & path, std::string_view text)
{
  writeFileAtomic(path, std::as_bytes(std::span<const char>(text.data(), text.size())));
}

}  // namespace preseg::data
