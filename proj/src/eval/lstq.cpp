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

#include "preseg/eval/lstq.hpp"

#include "preseg/common/error.hpp"

#include <cmath>
#include <iomanip>
#include <map>

namespace preseg::eval
{

double associationScore(const data::LabelMap & prediction, const data::LabelMap & gt, const ClassSpec & classes)
{
  using Track = std::pair<std::uint16_t, std::uint16_t>;
  std::map<Track, std::size_t> gt_size;
  std::map<std::uint16_t, std::size_t> pred_size;
  std::map<std::pair<Track, std::uint16_t>, std::size_t> inter;
  bool same_shape = prediction.size() == gt.size();
  for (std::size_t f = 0; same_shape && f < gt.size(); ++f) {
    same_shape = prediction[f].size() == gt[f].size();
  }
  if (!same_shape) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and ground truth differ in shape");
  }
  for (std::size_t f = 0; f < gt.size(); ++f) {
    for (std::size_t i = 0; i < gt[f].size(); ++i) {
      const auto & g = gt[f][i];
      if (g.semantic == 0) {
        continue;
      }
      const auto s = prediction[f][i].instance;
      if (s != 0) {
        ++pred_size[s];
      }
      if (!classes.isThing(g.semantic)) {
        continue;
      }
      const Track t{g.semantic, g.instance};
      ++gt_size[t];
      if (s != 0) {
        ++inter[{t, s}];
      }
    }
  }
  if (gt_size.empty()) {
    return 0.0;
  }
  std::map<Track, double> per_track;
  for (const auto & [key, n] : inter) {
    const auto & [t, s] = key;
    const double tpa = static_cast<double>(n);
    const double iou = tpa / static_cast<double>(gt_size[t] + pred_size[s] - n);
    per_track[t] += tpa * iou;
  }
  double sum = 0.0;
  for (const auto & [t, size] : gt_size) {
    sum += per_track[t] / static_cast<double>(size);
  }
  return sum / static_cast<double>(gt_size.size());
}

TrackingReport lstq(
  const data::LabelMap & prediction, const data::LabelMap & aligned, const data::LabelMap & gt,
  const ClassSpec & classes)
{
  TrackingReport r;
  const auto ious = classIoU(aligned, gt);
  for (const auto & [c, v] : ious) {
    r.s_cls += v;
  }
  r.s_cls = ious.empty() ? 0.0 : r.s_cls / static_cast<double>(ious.size());
  r.s_assoc = associationScore(prediction, gt, classes);
  r.lstq = std::sqrt(r.s_assoc * r.s_cls);
  return r;
}

void writeKeyValue(std::ostream & out, const TrackingReport & r)
{
  out << std::fixed << std::setprecision(6) << "lstq=" << r.lstq << "\ns_assoc=" << r.s_assoc << "\ns_cls=" << r.s_cls
      << '\n';
}

}  // namespace preseg::eval
