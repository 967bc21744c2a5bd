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

#include "preseg/pipeline/service.hpp"

#include "preseg/common/error.hpp"
#include "preseg/data/io.hpp"
#include "preseg/pipeline/presegment.hpp"
#include "preseg/segmenter/wire.hpp"

#include <httplib.h>

#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace preseg::pipeline
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr char kMagic[4] = {'P', 'S', 'F', 'R'};
constexpr std::size_t kHeaderSize = 24;

template <typename T>
void put(std::vector<std::uint8_t> & out, T value)
{
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t offset)
{
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::string frameName(std::size_t f)
{
  char name[32];
  std::snprintf(name, sizeof(name), "%06zu", f);
  return name;
}

}  // namespace

static_assert(std::endian::native == std::endian::little, "payload layout assumes a little-endian host");

std::vector<std::uint8_t> encodeFramePayload(const FramePayload & payload)
{
  if (payload.points.size() != payload.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "frame payload: points and labels differ in size");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload.points.size() * 20);
  out.insert(out.end(), kMagic, kMagic + 4);
  put(out, kFramePayloadVersion);
  put(out, payload.frame);
  put(out, static_cast<std::uint32_t>(payload.points.size()));
  put(out, payload.version);
  for (const auto & p : payload.points) {
    put(out, p.x);
    put(out, p.y);
    put(out, p.z);
    put(out, p.intensity);
  }
  for (const auto & l : payload.labels) {
    put(out, l.packed());
  }
  return out;
}

FramePayload decodeFramePayload(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kMalformedFile, "frame payload: bad magic");
  }
  if (get<std::uint32_t>(bytes, 4) != kFramePayloadVersion) {
    throw Error(ErrorCode::kMalformedFile, "frame payload: unsupported layout version");
  }
  FramePayload p;
  p.frame = get<std::uint32_t>(bytes, 8);
  const auto n = get<std::uint32_t>(bytes, 12);
  p.version = get<std::uint64_t>(bytes, 16);
  if (bytes.size() != kHeaderSize + static_cast<std::size_t>(n) * 20) {
    throw Error(ErrorCode::kMalformedFile, "frame payload: length does not match the point count");
  }
  std::size_t at = kHeaderSize;
  for (std::uint32_t i = 0; i < n; ++i, at += 16) {
    p.points.push_back({get<float>(bytes, at), get<float>(bytes, at + 4), get<float>(bytes, at + 8),
                        get<float>(bytes, at + 12)});
  }
  for (std::uint32_t i = 0; i < n; ++i, at += 4) {
    p.labels.push_back(data::Label::unpack(get<std::uint32_t>(bytes, at)));
  }
  return p;
}

struct AnnotationService::Impl
{
  struct Entry
  {
    SequenceSource source;
    Sequence sequence;
    std::vector<std::vector<Eigen::Vector3f>> world;
    std::mutex writer;  // serializes mutations and their journal appends
    mutable std::mutex state_mutex;
    std::shared_ptr<AnnotationState> state;
    std::atomic<bool> busy{false};

    std::shared_ptr<AnnotationState> current() const
    {
      std::lock_guard lock(state_mutex);
      return state;
    }
  };

  struct Job
  {
    std::string id;
    std::atomic<int> status{0};  // 0 running, 1 done, 2 failed
    std::atomic<double> fraction{0.0};
    std::mutex mutex;
    std::string stage;
    std::string error;
  };

  explicit Impl(PipelineConfig c) : config(std::move(c)) { routes(); }

  PipelineConfig config;
  httplib::Server server;
  std::thread thread;
  mutable std::mutex mutex;
  std::map<std::string, std::shared_ptr<Entry>> sequences;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::vector<std::thread> workers;
  std::uint64_t next_job{1};

  std::shared_ptr<Entry> sequence(const std::string & name) const
  {
    std::lock_guard lock(mutex);
    const auto it = sequences.find(name);
    if (it == sequences.end()) {
      throw Error(ErrorCode::kNotFound, "unknown sequence " + name);
    }
    return it->second;
  }

  static data::LabelMap loadPresegmentation(const Entry & e)
  {
    data::LabelMap labels(e.sequence.frames.size());
    const auto dir = e.source.output_dir / "labels";
    for (std::size_t f = 0; f < labels.size(); ++f) {
      const auto path = dir / (frameName(f) + ".label");
      if (fs::exists(path)) {
        labels[f] = data::readLabelFile(path);
        if (labels[f].size() != e.sequence.frames[f].points.size()) {
          throw Error(ErrorCode::kDimensionMismatch, path.string() + " does not match its scan");
        }
      } else {
        labels[f].assign(e.sequence.frames[f].points.size(), data::Label{});
      }
    }
    return labels;
  }

  static std::vector<JournalEntry> loadJournal(const fs::path & path)
  {
    std::vector<JournalEntry> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) {
        continue;
      }
      try {
        out.push_back(journalEntryFromJson(json::parse(line)));
      } catch (const json::exception & ex) {
        throw Error(ErrorCode::kParse, path.string() + ": " + ex.what());
      }
    }
    return out;
  }

  void load(Entry & e)
  {
    auto state = AnnotationState::replay(
      loadPresegmentation(e), loadJournal(e.source.output_dir / "journal.jsonl"), e.world);
    std::lock_guard lock(e.state_mutex);
    e.state = std::move(state);
  }

  template <typename Fn>
  static void guarded(httplib::Response & res, Fn && fn)
  {
    try {
      fn();
    } catch (const Error & e) {
      res.status = e.code() == ErrorCode::kNotFound ? 404 : e.code() == ErrorCode::kConflict ? 409 : 400;
      if (e.code() == ErrorCode::kIo || e.code() == ErrorCode::kRange) {
        res.status = 500;
      }
      res.set_content(segmenter::wire::errorBody(e.code(), e.detail()).dump(), "application/json");
    } catch (const json::exception & e) {
      res.status = 400;
      res.set_content(segmenter::wire::errorBody(ErrorCode::kParse, e.what()).dump(), "application/json");
    }
  }

  static void reply(httplib::Response & res, const json & body)
  {
    res.set_content(body.dump(), "application/json");
  }

  void mutate(const httplib::Request & req, httplib::Response & res, const char * op)
  {
    guarded(res, [&] {
      const auto entry = sequence(req.matches[1]);
      json body = req.body.empty() ? json::object() : json::parse(req.body);
      if (!body.is_object()) {
        throw Error(ErrorCode::kParameter, "request body must be an object");
      }
      std::optional<std::uint64_t> expected;
      if (body.contains("expected_version")) {
        expected = body.at("expected_version").get<std::uint64_t>();
        body.erase("expected_version");
      }
      body["op"] = op;
      std::lock_guard lock(entry->writer);
      if (entry->busy) {
        throw Error(ErrorCode::kConflict, "presegmentation is running; retry when the job finishes");
      }
      const auto state = entry->current();
      JournalEntry applied;
      try {
        applied = state->apply(body, expected);
      } catch (const Error & e) {
        if (e.code() != ErrorCode::kConflict) {
          throw;
        }
        res.status = 409;
        auto err = segmenter::wire::errorBody(e.code(), e.detail());
        err["retry_version"] = state->version();
        reply(res, err);
        return;
      }
      std::ofstream out(entry->source.output_dir / "journal.jsonl", std::ios::app);
      out << toJson(applied).dump() << '\n';
      if (!out) {
        throw Error(ErrorCode::kIo, "cannot append to the journal");
      }
      reply(res, {{"version", applied.version}, {"entry", toJson(applied)}});
    });
  }

  void startJob(const std::shared_ptr<Entry> & entry, PipelineConfig job_config, httplib::Response & res)
  {
    {
      std::lock_guard lock(entry->writer);
      if (entry->busy.exchange(true)) {
        throw Error(ErrorCode::kConflict, "presegmentation already running for " + entry->source.name);
      }
    }
    auto job = std::make_shared<Job>();
    std::lock_guard lock(mutex);
    job->id = "job-" + std::to_string(next_job++);
    jobs[job->id] = job;
    workers.emplace_back([this, entry, job, job_config] {
      try {
        const auto seg = makeSegmenter(job_config.segmenter);
        const auto result = presegment(entry->sequence, job_config, *seg, [&](const ProgressEvent & e) {
          job->fraction = e.fraction;
          std::lock_guard l(job->mutex);
          job->stage = e.stage;
        });
        std::lock_guard w(entry->writer);
        writeResult(result, entry->source.output_dir);
        fs::remove(entry->source.output_dir / "journal.jsonl");
        load(*entry);
        job->status = 1;
      } catch (const std::exception & e) {
        std::lock_guard l(job->mutex);
        job->error = e.what();
        job->status = 2;
      }
      entry->busy = false;
    });
    reply(res, {{"job", job->id}});
  }

  void routes()
  {
    server.Get("/sequences", [this](const httplib::Request &, httplib::Response & res) {
      guarded(res, [&] {
        json list = json::array();
        std::lock_guard lock(mutex);
        for (const auto & [name, e] : sequences) {
          list.push_back({{"name", name}, {"frames", e->sequence.frames.size()}, {"version", e->current()->version()}});
        }
        reply(res, {{"sequences", list}});
      });
    });
    server.Get(R"(/sequences/([^/]+)/frames/(\d+))", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const auto entry = sequence(req.matches[1]);
        const auto f = std::stoull(req.matches[2]);
        const auto snap = entry->current()->snapshot();
        if (f >= snap->frameCount()) {
          throw Error(ErrorCode::kNotFound, "unknown frame " + std::string(req.matches[2]));
        }
        FramePayload p;
        p.frame = static_cast<std::uint32_t>(f);
        p.version = snap->version;
        p.points = entry->sequence.frames[f].points;
        p.labels = snap->labels(p.frame);
        const auto bytes = encodeFramePayload(p);
        res.set_content(reinterpret_cast<const char *>(bytes.data()), bytes.size(), "application/octet-stream");
      });
    });
    server.Get(R"(/sequences/([^/]+)/segments)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const auto snap = sequence(req.matches[1])->current()->snapshot();
        json list = json::array();
        for (const auto & s : snap->summaries()) {
          json frames = json::array();
          json points = json::array();
          for (const auto & [f, n] : s.points) {
            frames.push_back(f);
            points.push_back(n);
          }
          list.push_back({{"id", s.id}, {"semantic", s.semantic}, {"instance", s.instance}, {"frames", frames},
                          {"points", points}});
        }
        reply(res, {{"version", snap->version}, {"segments", list}});
      });
    });
    for (const auto * op : {"assign", "merge", "split", "auto_instance"}) {
      server.Post(std::string(R"(/sequences/([^/]+)/)") + op,
                  [this, op](const httplib::Request & req, httplib::Response & res) { mutate(req, res, op); });
    }
    server.Post(R"(/sequences/([^/]+)/save)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const auto entry = sequence(req.matches[1]);
        const auto snap = entry->current()->snapshot();
        const auto dir = entry->source.output_dir / "annotated";
        fs::create_directories(dir);
        for (std::uint32_t f = 0; f < snap->frameCount(); ++f) {
          data::writeLabelFile(snap->labels(f), dir / (frameName(f) + ".label"));
        }
        reply(res, {{"version", snap->version}, {"frames", snap->frameCount()}});
      });
    });
    server.Post(R"(/sequences/([^/]+)/presegment)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        const auto entry = sequence(req.matches[1]);
        json j = toJson(config);
        if (!req.body.empty()) {
          j.merge_patch(json::parse(req.body));
        }
        j["manifest"] = entry->source.manifest.string();
        j["output_dir"] = entry->source.output_dir.string();
        startJob(entry, configFromJson(j), res);
      });
    });
    server.Get(R"(/jobs/([^/]+)/progress)", [this](const httplib::Request & req, httplib::Response & res) {
      guarded(res, [&] {
        std::shared_ptr<Job> job;
        {
          std::lock_guard lock(mutex);
          const auto it = jobs.find(req.matches[1]);
          if (it == jobs.end()) {
            throw Error(ErrorCode::kNotFound, "unknown job " + std::string(req.matches[1]));
          }
          job = it->second;
        }
        static constexpr const char * kStatus[] = {"running", "done", "failed"};
        std::lock_guard l(job->mutex);
        reply(res, {{"job", job->id}, {"state", kStatus[job->status.load()]}, {"stage", job->stage},
                    {"fraction", job->fraction.load()}, {"error", job->error}});
      });
    });
  }
};

AnnotationService::AnnotationService(PipelineConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

AnnotationService::~AnnotationService()
{
  stop();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(impl_->mutex);
    workers.swap(impl_->workers);
  }
  for (auto & w : workers) {
    w.join();
  }
}

void AnnotationService::addSequence(const SequenceSource & source)
{
  auto entry = std::make_shared<Impl::Entry>();
  entry->source = source;
  entry->sequence = loadSequence(source.manifest);
  for (std::size_t f = 0; f < entry->sequence.frames.size(); ++f) {
    const auto & pose = entry->sequence.poses[f];
    std::vector<Eigen::Vector3f> world;
    for (const auto & p : entry->sequence.frames[f].points) {
      world.push_back(pose.apply(p.position()).cast<float>());
    }
    entry->world.push_back(std::move(world));
  }
  fs::create_directories(source.output_dir);
  impl_->load(*entry);
  std::lock_guard lock(impl_->mutex);
  impl_->sequences[source.name] = std::move(entry);
}

std::shared_ptr<AnnotationState> AnnotationService::state(const std::string & name) const
{
  return impl_->sequence(name)->current();
}

int AnnotationService::start(const std::string & host, int port)
{
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void AnnotationService::listen(const std::string & host, int port)
{
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void AnnotationService::stop()
{
  impl_->server.stop();
  if (impl_->thread.joinable()) {
    impl_->thread.join();
  }
}

}  // namespace preseg::pipeline
