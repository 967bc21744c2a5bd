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

#ifndef PRESEG__EVAL__LSTQ_HPP_
#define PRESEG__EVAL__LSTQ_HPP_

#include "preseg/data/types.hpp"
#include "preseg/eval/panoptic.hpp"

#include <ostream>

namespace preseg::eval
{

struct TrackingReport
{
  double lstq{};
  double s_assoc{};
  double s_cls{};
};

/// Association over ground-truth thing tracks (class, instance) and predicted
/// tracks (instance ids of `prediction`), both as point sets over the whole
/// sequence; classification from the class IoU of `aligned`.
TrackingReport lstq(
  const data::LabelMap & prediction, const data::LabelMap & aligned, const data::LabelMap & gt,
  const ClassSpec & classes);

/// The association term alone.
double associationScore(const data::LabelMap & prediction, const data::LabelMap & gt, const ClassSpec & classes);

void writeKeyValue(std::ostream & out, const TrackingReport & report);

}  // namespace preseg::eval

#endif  // PRESEG__EVAL__LSTQ_HPP_
