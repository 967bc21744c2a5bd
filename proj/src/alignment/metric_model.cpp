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

#include "preseg/alignment/metric_model.hpp"

#include "preseg/common/error.hpp"
#include "preseg/data/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace preseg::alignment
{

namespace
{

double squaredDistance(const std::vector<double> & a, const std::vector<double> & b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::string fnv1a(std::span<const std::vector<double>> rows)
{
  std::uint64_t h = 1469598103934665603ull;
  for (const auto & row : rows) {
    for (const double v : row) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      for (auto b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace

KMeansResult kmeans(
  std::span<const std::vector<double>> points, int clusters, std::uint64_t seed, int max_iterations)
{
  if (clusters < 1) {
    throw Error(ErrorCode::kParameter, "cluster count must be positive");
  }
  if (points.size() < static_cast<std::size_t>(clusters)) {
    throw Error(
      ErrorCode::kFit, "need at least " + std::to_string(clusters) + " samples, got " +
                         std::to_string(points.size()));
  }
  const std::size_t n = points.size();
  const auto k = static_cast<std::size_t>(clusters);
  std::mt19937_64 rng(seed);

  KMeansResult res;
  // k-means++ seeding
  res.centers.push_back(points[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (res.centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squaredDistance(points[i], res.centers.back()));
      total += nearest[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (pick = 0; pick + 1 < n; ++pick) {
        r -= nearest[pick];
        if (r < 0.0) {
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    res.centers.push_back(points[pick]);
  }

  res.assignment.assign(n, -1);
  const std::size_t dim = points.front().size();
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squaredDistance(points[i], res.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
      objective += best_d;
    }
    res.objective.push_back(objective);
    if (!changed && iter > 0) {
      break;
    }
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.assignment[i]);
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) {
        sums[c][d] += points[i][d];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        continue;  // empty cluster keeps its center
      }
      for (std::size_t d = 0; d < dim; ++d) {
        res.centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  return res;
}

MetricModel fitMetricModel(std::span<const GrayImage> corpus, const MetricFitParams & params)
{
  return fitMetricModel(corpus, params, nullptr);
}

MetricModel fitMetricModel(std::span<const GrayImage> corpus, const MetricFitParams & params, KMeansResult * trace)
{
  const auto edges = defaultBinEdges(params.bins);
  std::vector<std::vector<double>> descriptors;
  for (const auto & img : corpus) {
    const GrayImage crop = centerCrop(img, params.crop_width, params.crop_height);
    if (crop.empty()) {
      continue;
    }
    descriptors.push_back(histogramDescriptor(frequencyFeature(crop), edges).gamma);
  }
  if (descriptors.size() < static_cast<std::size_t>(params.clusters)) {
    throw Error(
      ErrorCode::kFit, "corpus has " + std::to_string(descriptors.size()) + " usable images, need " +
                         std::to_string(params.clusters));
  }
  KMeansResult km = kmeans(descriptors, params.clusters, params.seed, params.max_iterations);
  MetricModel model;
  model.edges = edges;
  model.centers = km.centers;
  model.fingerprint = fnv1a(descriptors);
  model.crop_width = params.crop_width;
  model.crop_height = params.crop_height;
  if (trace != nullptr) {
    *trace = std::move(km);
  }
  return model;
}

std::vector<GrayImage> loadCorpus(const std::filesystem::path & dir)
{
  std::vector<std::filesystem::path> files;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GrayImage> images;
  images.reserve(files.size());
  for (const auto & f : files) {
    images.push_back(toGray(readPng(f)));
  }
  return images;
}

double domainDistance(const MetricModel & model, const HistogramDescriptor & descriptor)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto & c : model.centers) {
    best = std::min(best, squaredDistance(descriptor.gamma, c));
  }
  return std::sqrt(best);
}

double domainDistance(const MetricModel & model, const GrayImage & image)
{
  if (image.width > model.crop_width && image.height > model.crop_height && model.crop_width > 0) {
    const GrayImage crop = centerCrop(image, model.crop_width, model.crop_height);
    return domainDistance(model, histogramDescriptor(frequencyFeature(crop), model.edges));
  }
  return domainDistance(model, histogramDescriptor(frequencyFeature(image), model.edges));
}

void saveMetricModel(const MetricModel & model, const std::filesystem::path & path)
{
  nlohmann::json j;
  j["format"] = "preseg-metric-model";
  j["version"] = MetricModel::kFormatVersion;
  j["edges"] = model.edges;
  j["centers"] = model.centers;
  j["fingerprint"] = model.fingerprint;
  j["crop"] = {model.crop_width, model.crop_height};
  data::writeFileAtomic(path, j.dump() + "\n");
}

MetricModel loadMetricModel(const std::filesystem::path & path)
{
  const auto bytes = data::readBytes(path);
  try {
    const auto j = nlohmann::json::parse(
      reinterpret_cast<const char *>(bytes.data()), reinterpret_cast<const char *>(bytes.data()) + bytes.size());
    if (j.at("format") != "preseg-metric-model") {
      throw Error(ErrorCode::kParse, "not a metric model file");
    }
    if (j.at("version").get<int>() != MetricModel::kFormatVersion) {
      throw Error(ErrorCode::kParse, "unsupported metric model version");
    }
    MetricModel m;
    m.edges = j.at("edges").get<std::vector<double>>();
    m.centers = j.at("centers").get<std::vector<std::vector<double>>>();
    m.fingerprint = j.at("fingerprint").get<std::string>();
    m.crop_width = j.at("crop").at(0).get<int>();
    m.crop_height = j.at("crop").at(1).get<int>();
    validateBinEdges(m.edges);
    for (const auto & c : m.centers) {
      if (c.size() != m.dimension()) {
        throw Error(ErrorCode::kParse, "center dimension does not match bin count");
      }
      for (double v : c) {
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kParse, "non-finite center");
        }
      }
    }
    return m;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("metric model: ") + e.what());
  }
}

}  // namespace preseg::alignment
