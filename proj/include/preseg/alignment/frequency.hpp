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

#ifndef PRESEG__ALIGNMENT__FREQUENCY_HPP_
#define PRESEG__ALIGNMENT__FREQUENCY_HPP_

#include "preseg/alignment/image.hpp"

#include <span>
#include <vector>

namespace preseg::alignment
{

/// |DFT| of an image divided by its maximum, DC included. All zeros when the
/// spectrum is identically zero. Row-major, same shape as the source image.
struct FrequencyFeature
{
  int rows{};
  int cols{};
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

struct HistogramDescriptor
{
  std::vector<double> gamma;  // one entry per magnitude bin
  std::vector<double> edges;  // gamma.size() + 1 strictly increasing values
};

FrequencyFeature frequencyFeature(const GrayImage & image);

/// gamma_k = mean over all elements of value * [edges[k] <= value < edges[k+1]].
/// Throws Error(kParameter) unless edges are strictly increasing with
/// edges.front() <= 0 and edges.back() > 1.
HistogramDescriptor histogramDescriptor(const FrequencyFeature & feature, std::span<const double> edges);

/// 0, then log-spaced edges from 1e-6 up to 10^-0.4, then 1.0001. Normalized
/// spectra of natural images are dominated by tiny magnitudes, so uniform
/// edges would put nearly everything in the first bin.
std::vector<double> defaultBinEdges(int bins = 16);

void validateBinEdges(std::span<const double> edges);

}  // namespace preseg::alignment

#endif  // PRESEG__ALIGNMENT__FREQUENCY_HPP_
