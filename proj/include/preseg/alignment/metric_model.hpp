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

#ifndef PRESEG__ALIGNMENT__METRIC_MODEL_HPP_
#define PRESEG__ALIGNMENT__METRIC_MODEL_HPP_

#include "preseg/alignment/frequency.hpp"
#include "preseg/alignment/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace preseg::alignment
{

/// Cluster centers over histogram descriptors of a reference image corpus.
/// Distance of an image to the corpus is the L2 distance of its descriptor to
/// the nearest center.
struct MetricModel
{
  static constexpr int kFormatVersion = 1;

  std::vector<double> edges;
  std::vector<std::vector<double>> centers;
  std::string fingerprint;  // hex FNV-1a of the fit descriptors
  int crop_width{};
  int crop_height{};

  std::size_t dimension() const { return edges.empty() ? 0 : edges.size() - 1; }
};

struct MetricFitParams
{
  int bins{16};
  int clusters{64};
  std::uint64_t seed{0};
  int max_iterations{100};
  int crop_width{1080};
  int crop_height{720};
};

struct KMeansResult
{
  std::vector<std::vector<double>> centers;
  std::vector<int> assignment;
  std::vector<double> objective;  // sum of squared distances, one entry per Lloyd iteration
};

/// Lloyd's algorithm with k-means++ seeding from `seed`.
/// Throws Error(kFit) when there are fewer points than clusters.
KMeansResult kmeans(
  std::span<const std::vector<double>> points, int clusters, std::uint64_t seed, int max_iterations = 100);

/// Images smaller than the crop are skipped; the rest are center-cropped.
/// Throws Error(kFit) when fewer than params.clusters images remain.
MetricModel fitMetricModel(std::span<const GrayImage> corpus, const MetricFitParams & params);
MetricModel fitMetricModel(std::span<const GrayImage> corpus, const MetricFitParams & params, KMeansResult * trace);

/// Every *.png file in `dir`, in filename order.
std::vector<GrayImage> loadCorpus(const std::filesystem::path & dir);

double domainDistance(const MetricModel & model, const HistogramDescriptor & descriptor);
/// Images larger than the model's crop in both axes are center-cropped first.
double domainDistance(const MetricModel & model, const GrayImage & image);

void saveMetricModel(const MetricModel & model, const std::filesystem::path & path);
MetricModel loadMetricModel(const std::filesystem::path & path);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__METRIC_MODEL_HPP_
