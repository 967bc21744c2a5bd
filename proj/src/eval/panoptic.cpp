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

#include "preseg/eval/panoptic.hpp"

#include "preseg/common/error.hpp"

#include <iomanip>

namespace preseg::eval
{

ClassSpec ClassSpec::lidarDefaults()
{
  return {{10, 11, 13, 15, 16, 18, 20, 30, 31, 32}};
}

namespace
{

void requireSameShape(const data::LabelMap & a, const data::LabelMap & b)
{
  if (a.size() != b.size()) {
    throw Error(
      ErrorCode::kDimensionMismatch,
      "prediction has " + std::to_string(a.size()) + " frames, ground truth " + std::to_string(b.size()));
  }
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].size() != b[f].size()) {
      throw Error(
        ErrorCode::kDimensionMismatch, "frame " + std::to_string(f) + ": " + std::to_string(a[f].size()) +
                                         " predicted labels vs " + std::to_string(b[f].size()) + " ground-truth labels");
    }
  }
}

}  // namespace

std::map<std::uint16_t, std::uint16_t> semanticOracleAlign(const data::LabelMap & prediction, const data::LabelMap & gt)
{
  requireSameShape(prediction, gt);
  std::map<std::uint16_t, std::map<std::uint16_t, std::size_t>> votes;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    for (std::size_t i = 0; i < gt[f].size(); ++i) {
      const auto seg = prediction[f][i].instance;
      if (seg == 0) {
        continue;
      }
      auto & v = votes[seg];
      if (gt[f][i].semantic != 0) {
        ++v[gt[f][i].semantic];
      }
    }
  }
  std::map<std::uint16_t, std::uint16_t> out;
  for (const auto & [seg, v] : votes) {
    std::uint16_t best = 0;
    std::size_t best_count = 0;
    for (const auto & [cls, n] : v) {  // ascending class, strict > keeps the smaller on ties
      if (n > best_count) {
        best = cls;
        best_count = n;
      }
    }
    out[seg] = best;
  }
  return out;
}

data::LabelMap applyAlignment(
  const data::LabelMap & prediction, const std::map<std::uint16_t, std::uint16_t> & assignment, const ClassSpec & classes)
{
  data::LabelMap out(prediction.size());
  std::map<std::uint16_t, std::uint16_t> renumbered;
  std::map<std::uint16_t, std::uint16_t> next_in_class;
  for (std::size_t f = 0; f < prediction.size(); ++f) {
    out[f].resize(prediction[f].size());
    for (std::size_t i = 0; i < prediction[f].size(); ++i) {
      const auto seg = prediction[f][i].instance;
      const auto it = assignment.find(seg);
      if (seg == 0 || it == assignment.end() || it->second == 0) {
        continue;
      }
      const std::uint16_t cls = it->second;
      std::uint16_t inst = 0;
      if (classes.isThing(cls)) {
        auto [r, inserted] = renumbered.try_emplace(seg, 0);
        if (inserted) {
          r->second = ++next_in_class[cls];
        }
        inst = r->second;
      }
      out[f][i] = {cls, inst};
    }
  }
  return out;
}

std::map<std::uint16_t, double> classIoU(const data::LabelMap & aligned, const data::LabelMap & gt)
{
  requireSameShape(aligned, gt);
  std::map<std::uint16_t, std::size_t> tp;
  std::map<std::uint16_t, std::size_t> fp;
  std::map<std::uint16_t, std::size_t> fn;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    for (std::size_t i = 0; i < gt[f].size(); ++i) {
      const auto g = gt[f][i].semantic;
      if (g == 0) {
        continue;
      }
      const auto p = aligned[f][i].semantic;
      if (p == g) {
        ++tp[g];
      } else {
        ++fn[g];
        if (p != 0) {
          ++fp[p];
        }
      }
    }
  }
  std::set<std::uint16_t> present;
  for (const auto * m : {&tp, &fp, &fn}) {
    for (const auto & [c, n] : *m) {
      present.insert(c);
    }
  }
  std::map<std::uint16_t, double> out;
  for (auto c : present) {
    const double denom = static_cast<double>(tp[c] + fp[c] + fn[c]);
    out[c] = static_cast<double>(tp[c]) / denom;
  }
  return out;
}

PanopticReport panopticQuality(const data::LabelMap & aligned, const data::LabelMap & gt, const ClassSpec & classes)
{
  requireSameShape(aligned, gt);
  using Key = std::pair<std::uint16_t, std::uint16_t>;  // (class, instance)
  struct Accum
  {
    double iou_sum{};
    std::size_t tp{};
    std::size_t fp{};
    std::size_t fn{};
  };
  std::map<std::uint16_t, Accum> acc;

  for (std::size_t f = 0; f < gt.size(); ++f) {
    std::map<Key, std::size_t> gt_area;
    std::map<Key, std::size_t> pred_area;
    std::map<std::pair<Key, Key>, std::size_t> inter;
    for (std::size_t i = 0; i < gt[f].size(); ++i) {
      const auto & g = gt[f][i];
      if (g.semantic == 0) {
        continue;
      }
      const Key gk{g.semantic, classes.isThing(g.semantic) ? g.instance : std::uint16_t{0}};
      ++gt_area[gk];
      const auto & p = aligned[f][i];
      if (p.semantic == 0) {
        continue;
      }
      const Key pk{p.semantic, classes.isThing(p.semantic) ? p.instance : std::uint16_t{0}};
      ++pred_area[pk];
      if (pk.first == gk.first) {
        ++inter[{gk, pk}];
      }
    }
    std::set<Key> matched_gt;
    std::set<Key> matched_pred;
    for (const auto & [pair, n] : inter) {
      const auto & [gk, pk] = pair;
      const double uni = static_cast<double>(gt_area[gk] + pred_area[pk] - n);
      const double iou = static_cast<double>(n) / uni;
      if (iou > 0.5) {
        matched_gt.insert(gk);
        matched_pred.insert(pk);
        acc[gk.first].iou_sum += iou;
        ++acc[gk.first].tp;
      }
    }
    for (const auto & [gk, n] : gt_area) {
      if (!matched_gt.count(gk)) {
        ++acc[gk.first].fn;
      }
    }
    for (const auto & [pk, n] : pred_area) {
      if (!matched_pred.count(pk)) {
        ++acc[pk.first].fp;
      }
    }
  }

  PanopticReport report;
  const auto ious = classIoU(aligned, gt);
  std::size_t n_things = 0;
  std::size_t n_stuff = 0;
  for (const auto & [c, a] : acc) {
    ClassScore s;
    s.tp = a.tp;
    s.fp = a.fp;
    s.fn = a.fn;
    s.thing = classes.isThing(c);
    const double denom = static_cast<double>(a.tp) + 0.5 * static_cast<double>(a.fp + a.fn);
    s.pq = denom > 0.0 ? a.iou_sum / denom : 0.0;
    s.rq = denom > 0.0 ? static_cast<double>(a.tp) / denom : 0.0;
    s.sq = a.tp > 0 ? a.iou_sum / static_cast<double>(a.tp) : 0.0;
    const auto it = ious.find(c);
    s.iou = it != ious.end() ? it->second : 0.0;
    report.classes[c] = s;
    report.pq += s.pq;
    report.sq += s.sq;
    report.rq += s.rq;
    (s.thing ? report.pq_things : report.pq_stuff) += s.pq;
    ++(s.thing ? n_things : n_stuff);
  }
  if (!report.classes.empty()) {
    const auto n = static_cast<double>(report.classes.size());
    report.pq /= n;
    report.sq /= n;
    report.rq /= n;
  }
  report.pq_things = n_things > 0 ? report.pq_things / static_cast<double>(n_things) : 0.0;
  report.pq_stuff = n_stuff > 0 ? report.pq_stuff / static_cast<double>(n_stuff) : 0.0;
  for (const auto & [c, v] : ious) {
    report.miou += v;
  }
  report.miou = ious.empty() ? 0.0 : report.miou / static_cast<double>(ious.size());
  return report;
}

void writeKeyValue(std::ostream & out, const PanopticReport & r)
{
  out << std::fixed << std::setprecision(6) << "pq=" << r.pq << "\npq_things=" << r.pq_things
      << "\npq_stuff=" << r.pq_stuff << "\nsq=" << r.sq << "\nrq=" << r.rq << "\nmiou=" << r.miou << '\n';
}

void writeRows(std::ostream & out, const PanopticReport & r)
{
  out << "class,kind,pq,sq,rq,iou,tp,fp,fn\n" << std::fixed << std::setprecision(6);
  for (const auto & [c, s] : r.classes) {
    out << c << ',' << (s.thing ? "thing" : "stuff") << ',' << s.pq << ',' << s.sq << ',' << s.rq << ',' << s.iou
        << ',' << s.tp << ',' << s.fp << ',' << s.fn << '\n';
  }
}

}  // namespace preseg::eval
