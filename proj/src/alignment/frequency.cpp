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

#include "preseg/alignment/frequency.hpp"

#include "preseg/common/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

namespace preseg::alignment
{

namespace
{

// fftw planning is not thread safe; execution with distinct buffers is.
std::mutex & planMutex()
{
  static std::mutex m;
  return m;
}

}  // namespace

FrequencyFeature frequencyFeature(const GrayImage & image)
{
  FrequencyFeature out;
  out.rows = image.height;
  out.cols = image.width;
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  out.values.assign(n, 0.0);
  if (n == 0) {
    return out;
  }
  const int rows = image.height;
  const int cols = image.width;
  const int half = cols / 2 + 1;

  double * in = fftw_alloc_real(n);
  fftw_complex * spec = fftw_alloc_complex(static_cast<std::size_t>(rows) * half);
  fftw_plan plan;
  {
    std::lock_guard lock(planMutex());
    plan = fftw_plan_dft_r2c_2d(rows, cols, in, spec, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = image.pixels[i];
  }
  fftw_execute(plan);

  double peak = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < half; ++c) {
      const fftw_complex & z = spec[static_cast<std::size_t>(r) * half + c];
      const double mag = std::hypot(z[0], z[1]);
      out.values[static_cast<std::size_t>(r) * cols + c] = mag;
      // Hermitian symmetry fills the other half: F[-r][-c] = conj(F[r][c]).
      const int mr = (rows - r) % rows;
      const int mc = (cols - c) % cols;
      out.values[static_cast<std::size_t>(mr) * cols + mc] = mag;
      peak = std::max(peak, mag);
    }
  }
  {
    std::lock_guard lock(planMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(spec);

  if (peak > 0.0) {
    for (auto & v : out.values) {
      v /= peak;
    }
  } else {
    std::fill(out.values.begin(), out.values.end(), 0.0);
  }
  return out;
}

void validateBinEdges(std::span<const double> edges)
{
  if (edges.size() < 2) {
    throw Error(ErrorCode::kParameter, "need at least two bin edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::kParameter, "bin edges must be strictly increasing");
    }
  }
  if (!(edges.front() <= 0.0) || !(edges.back() > 1.0)) {
    throw Error(ErrorCode::kParameter, "bin edges must cover [0,1]");
  }
}

HistogramDescriptor histogramDescriptor(const FrequencyFeature & feature, std::span<const double> edges)
{
  validateBinEdges(edges);
  HistogramDescriptor d;
  d.edges.assign(edges.begin(), edges.end());
  const std::size_t bins = edges.size() - 1;
  d.gamma.assign(bins, 0.0);
  if (feature.values.empty()) {
    return d;
  }
  for (const double v : feature.values) {
    // First edge strictly greater than v closes v's bin.
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    if (it == edges.begin() || it == edges.end()) {
      continue;
    }
    d.gamma[static_cast<std::size_t>(it - edges.begin()) - 1] += v;
  }
  const double count = static_cast<double>(feature.values.size());
  for (auto & g : d.gamma) {
    g /= count;
  }
  return d;
}

std::vector<double> defaultBinEdges(int bins)
{
  if (bins < 2) {
    throw Error(ErrorCode::kParameter, "need at least two bins");
  }
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int k = 1; k < bins; ++k) {
    const double exponent = -6.0 + 5.6 * static_cast<double>(k - 1) / std::max(1, bins - 2);
    edges.push_back(std::pow(10.0, exponent));
  }
  edges.push_back(1.0001);
  return edges;
}

}  // namespace preseg::alignment
