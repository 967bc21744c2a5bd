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

#include "preseg/pipeline/annotation_state.hpp"

#include "preseg/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <unordered_map>

namespace preseg::pipeline
{

namespace
{

using nlohmann::json;

constexpr std::uint32_t kMaxSegment = std::numeric_limits<std::uint16_t>::max();

[[noreturn]] void badRequest(const std::string & message)
{
  throw Error(ErrorCode::kParameter, message);
}

template <typename T>
T field(const json & op, const char * key)
{
  if (!op.contains(key)) {
    badRequest(std::string("missing field '") + key + "'");
  }
  try {
    return op.at(key).get<T>();
  } catch (const json::exception &) {
    badRequest(std::string("field '") + key + "' has the wrong type");
  }
}

void requireSegment(const AnnotationSnapshot & s, std::uint32_t id)
{
  if (!s.hasSegment(id)) {
    throw Error(ErrorCode::kNotFound, "unknown segment " + std::to_string(id));
  }
}

struct CellHash
{
  std::size_t operator()(const Eigen::Vector3i & k) const noexcept
  {
    return static_cast<std::size_t>(static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.x())) * 73856093ull ^
                                    static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.y())) * 19349663ull ^
                                    static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.z())) * 83492791ull);
  }
};

// Nearest labeled reference point within one cell ring.
class NeighborIndex
{
public:
  static constexpr float kCell = 1.0f;

  void add(const Eigen::Vector3f & p, std::uint32_t label)
  {
    cells_[key(p)].push_back({p, label});
  }
  bool empty() const { return cells_.empty(); }

  std::optional<std::uint32_t> nearest(const Eigen::Vector3f & p) const
  {
    const auto k = key(p);
    float best = std::numeric_limits<float>::infinity();
    std::optional<std::uint32_t> label;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(k + Eigen::Vector3i(dx, dy, dz));
          if (it == cells_.end()) {
            continue;
          }
          for (const auto & [q, l] : it->second) {
            const float d = (q - p).squaredNorm();
            if (d < best) {
              best = d;
              label = l;
            }
          }
        }
      }
    }
    return label;
  }

private:
  static Eigen::Vector3i key(const Eigen::Vector3f & p)
  {
    return (p / kCell).array().floor().cast<int>();
  }

  std::unordered_map<Eigen::Vector3i, std::vector<std::pair<Eigen::Vector3f, std::uint32_t>>, CellHash> cells_;
};

}  // namespace

data::FrameLabels AnnotationSnapshot::labels(std::uint32_t frame) const
{
  const auto & seg = *segments.at(frame);
  data::FrameLabels out(seg.size());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const auto id = seg[i];
    if (id == 0) {
      continue;
    }
    const auto s = semantic.find(id);
    const auto n = instance.find(id);
    out[i] = {s == semantic.end() ? std::uint16_t{0} : s->second,
              n == instance.end() ? static_cast<std::uint16_t>(id) : n->second};
  }
  return out;
}

data::LabelMap AnnotationSnapshot::labels() const
{
  data::LabelMap out;
  for (std::uint32_t f = 0; f < segments.size(); ++f) {
    out.push_back(labels(f));
  }
  return out;
}

std::vector<SegmentSummary> AnnotationSnapshot::summaries() const
{
  std::map<std::uint32_t, SegmentSummary> by_id;
  for (std::uint32_t f = 0; f < segments.size(); ++f) {
    for (const auto id : *segments[f]) {
      if (id != 0) {
        ++by_id[id].points[f];
      }
    }
  }
  std::vector<SegmentSummary> out;
  for (auto & [id, s] : by_id) {
    s.id = id;
    const auto c = semantic.find(id);
    s.semantic = c == semantic.end() ? 0 : c->second;
    const auto n = instance.find(id);
    s.instance = n == instance.end() ? static_cast<std::uint16_t>(id) : n->second;
    out.push_back(std::move(s));
  }
  return out;
}

AnnotationState::AnnotationState(
  const data::LabelMap & presegmentation, std::vector<std::vector<Eigen::Vector3f>> world_points)
: world_(std::move(world_points))
{
  if (!world_.empty()) {
    if (world_.size() != presegmentation.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "geometry and labels differ in frame count");
    }
    for (std::size_t f = 0; f < world_.size(); ++f) {
      if (world_[f].size() != presegmentation[f].size()) {
        throw Error(ErrorCode::kDimensionMismatch, "geometry and labels differ in frame " + std::to_string(f));
      }
    }
  }
  auto s = std::make_shared<AnnotationSnapshot>();
  for (const auto & frame : presegmentation) {
    auto seg = std::make_shared<std::vector<std::uint32_t>>(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
      (*seg)[i] = frame[i].instance;
      if (frame[i].instance != 0) {
        s->ids.insert(frame[i].instance);
        if (frame[i].semantic != 0) {
          s->semantic[frame[i].instance] = frame[i].semantic;
        }
      }
    }
    s->segments.push_back(std::move(seg));
  }
  current_ = std::move(s);
}

std::shared_ptr<const AnnotationSnapshot> AnnotationState::snapshot() const
{
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

std::vector<JournalEntry> AnnotationState::journal() const
{
  std::lock_guard lock(writer_mutex_);
  return journal_;
}

JournalEntry AnnotationState::apply(const json & request, std::optional<std::uint64_t> expected_version)
{
  std::lock_guard lock(writer_mutex_);
  const auto base = snapshot();
  if (expected_version && *expected_version != base->version) {
    throw Error(ErrorCode::kConflict, "state is at version " + std::to_string(base->version) + ", request expected " +
                                        std::to_string(*expected_version) + "; reload and retry");
  }
  json op = request;
  auto next = mutate(*base, op);
  next->version = base->version + 1;
  JournalEntry entry{next->version, std::move(op)};
  journal_.push_back(entry);
  {
    std::lock_guard swap(snapshot_mutex_);
    current_ = std::move(next);
  }
  return entry;
}

std::shared_ptr<AnnotationSnapshot> AnnotationState::mutate(const AnnotationSnapshot & base, json & op) const
{
  if (!op.is_object()) {
    badRequest("operation must be an object");
  }
  const auto kind = field<std::string>(op, "op");
  auto next = std::make_shared<AnnotationSnapshot>(base);

  if (kind == "assign") {
    const auto id = field<std::uint32_t>(op, "segment_id");
    const auto semantic = field<std::uint16_t>(op, "semantic_id");
    requireSegment(base, id);
    if (semantic == 0) {
      next->semantic.erase(id);
    } else {
      next->semantic[id] = semantic;
    }
    return next;
  }

  if (kind == "merge") {
    auto ids = field<std::vector<std::uint32_t>>(op, "ids");
    if (ids.empty()) {
      badRequest("merge needs at least one id");
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (const auto id : ids) {
      requireSegment(base, id);
    }
    const auto target = ids.front();
    for (std::size_t f = 0; f < base.segments.size(); ++f) {
      const auto & frame = *base.segments[f];
      std::shared_ptr<std::vector<std::uint32_t>> copy;
      for (std::size_t i = 0; i < frame.size(); ++i) {
        if (frame[i] != target && std::binary_search(ids.begin(), ids.end(), frame[i])) {
          if (!copy) {
            copy = std::make_shared<std::vector<std::uint32_t>>(frame);
          }
          (*copy)[i] = target;
        }
      }
      if (copy) {
        next->segments[f] = std::move(copy);
      }
    }
    for (std::size_t k = 1; k < ids.size(); ++k) {
      next->ids.erase(ids[k]);
      next->semantic.erase(ids[k]);
      next->instance.erase(ids[k]);
    }
    return next;
  }

  if (kind == "split") {
    const auto id = field<std::uint32_t>(op, "segment_id");
    const auto frame = field<std::uint32_t>(op, "frame");
    auto points = field<std::vector<std::uint32_t>>(op, "point_indices");
    requireSegment(base, id);
    if (frame >= base.segments.size()) {
      throw Error(ErrorCode::kNotFound, "unknown frame " + std::to_string(frame));
    }
    if (points.empty()) {
      badRequest("split needs at least one point");
    }
    const auto & source = *base.segments[frame];
    for (const auto p : points) {
      if (p >= source.size() || source[p] != id) {
        badRequest("point " + std::to_string(p) + " of frame " + std::to_string(frame) + " is not in segment " +
                   std::to_string(id));
      }
    }
    std::uint32_t new_id = base.ids.empty() ? 1 : *base.ids.rbegin() + 1;
    if (op.contains("new_id")) {
      new_id = field<std::uint32_t>(op, "new_id");
      if (new_id == 0 || base.hasSegment(new_id)) {
        badRequest("new_id " + std::to_string(new_id) + " is taken");
      }
    }
    if (new_id > kMaxSegment) {
      throw Error(ErrorCode::kRange, "segment ids exhausted");
    }
    op["new_id"] = new_id;

    auto first = std::make_shared<std::vector<std::uint32_t>>(source);
    for (const auto p : points) {
      (*first)[p] = new_id;
    }
    next->segments[frame] = first;
    // Later frames follow their nearest labeled point in the last frame
    // where the segment was present.
    if (!world_.empty()) {
      std::uint32_t ref = frame;
      for (std::uint32_t f = frame + 1; f < base.segments.size(); ++f) {
        const auto & cur = *base.segments[f];
        if (std::find(cur.begin(), cur.end(), id) == cur.end()) {
          continue;
        }
        NeighborIndex index;
        const auto & prev = *next->segments[ref];
        for (std::size_t i = 0; i < prev.size(); ++i) {
          if (prev[i] == id || prev[i] == new_id) {
            index.add(world_[ref][i], prev[i]);
          }
        }
        auto copy = std::make_shared<std::vector<std::uint32_t>>(cur);
        for (std::size_t i = 0; i < cur.size(); ++i) {
          if (cur[i] == id && index.nearest(world_[f][i]) == new_id) {
            (*copy)[i] = new_id;
          }
        }
        next->segments[f] = std::move(copy);
        ref = f;
      }
    }
    next->ids.insert(new_id);
    const auto c = base.semantic.find(id);
    if (c != base.semantic.end()) {
      next->semantic[new_id] = c->second;
    }
    // The old segment may have moved out entirely.
    bool remains = false;
    for (const auto & frame_ptr : next->segments) {
      if (std::find(frame_ptr->begin(), frame_ptr->end(), id) != frame_ptr->end()) {
        remains = true;
        break;
      }
    }
    if (!remains) {
      next->ids.erase(id);
      next->semantic.erase(id);
      next->instance.erase(id);
    }
    return next;
  }

  if (kind == "auto_instance") {
    // (class, first frame, -size, id) orders the segments of each class.
    std::map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> seen;  // id -> (first frame, size)
    for (std::uint32_t f = 0; f < base.segments.size(); ++f) {
      for (const auto id : *base.segments[f]) {
        if (id == 0 || base.semantic.count(id) == 0) {
          continue;
        }
        auto [it, inserted] = seen.try_emplace(id, f, 0);
        ++it->second.second;
      }
    }
    std::vector<std::tuple<std::uint16_t, std::uint32_t, std::int64_t, std::uint32_t>> order;
    for (const auto & [id, fs] : seen) {
      order.emplace_back(base.semantic.at(id), fs.first, -static_cast<std::int64_t>(fs.second), id);
    }
    std::sort(order.begin(), order.end());
    next->instance.clear();
    std::uint16_t cls = 0;
    std::uint16_t n = 0;
    for (const auto & [c, first, neg_size, id] : order) {
      if (c != cls) {
        cls = c;
        n = 0;
      }
      next->instance[id] = ++n;
    }
    return next;
  }

  badRequest("unknown operation '" + kind + "'");
}

JournalEntry AnnotationState::assign(std::uint32_t segment, std::uint16_t semantic)
{
  return apply({{"op", "assign"}, {"segment_id", segment}, {"semantic_id", semantic}});
}

JournalEntry AnnotationState::merge(const std::vector<std::uint32_t> & ids)
{
  return apply({{"op", "merge"}, {"ids", ids}});
}

JournalEntry AnnotationState::split(std::uint32_t segment, std::uint32_t frame, const std::vector<std::uint32_t> & points)
{
  return apply({{"op", "split"}, {"segment_id", segment}, {"frame", frame}, {"point_indices", points}});
}

JournalEntry AnnotationState::autoInstance()
{
  return apply({{"op", "auto_instance"}});
}

std::unique_ptr<AnnotationState> AnnotationState::replay(
  const data::LabelMap & presegmentation, const std::vector<JournalEntry> & journal,
  std::vector<std::vector<Eigen::Vector3f>> world_points)
{
  auto state = std::make_unique<AnnotationState>(presegmentation, std::move(world_points));
  for (const auto & e : journal) {
    if (e.version != state->version() + 1) {
      throw Error(ErrorCode::kConflict, "journal entry " + std::to_string(e.version) + " out of order");
    }
    state->apply(e.op);
  }
  return state;
}

json toJson(const JournalEntry & entry)
{
  return {{"version", entry.version}, {"op", entry.op}};
}

JournalEntry journalEntryFromJson(const json & j)
{
  try {
    return {j.at("version").get<std::uint64_t>(), j.at("op")};
  } catch (const json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("journal entry: ") + e.what());
  }
}

}  // namespace preseg::pipeline
