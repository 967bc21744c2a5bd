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

#include "preseg/alignment/dead_leaves.hpp"
#include "preseg/alignment/metric_model.hpp"
#include "preseg/alignment/video.hpp"
#include "preseg/common/error.hpp"
#include "preseg/data/io.hpp"
#include "preseg/eval/lstq.hpp"
#include "preseg/eval/panoptic.hpp"
#include "preseg/pipeline/config.hpp"
#include "preseg/pipeline/presegment.hpp"
#include "preseg/pipeline/service.hpp"
#include "preseg/pipeline/synthetic_scene.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace preseg;
using nlohmann::json;

namespace
{

// --set path=value, value parsed as JSON when it is valid JSON.
json overrides(const std::vector<std::string> & sets)
{
  json j = json::object();
  for (const auto & s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kConfig, "--set expects key=value, got '" + s + "'");
    }
    const auto value = s.substr(eq + 1);
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) {
      v = value;
    }
    j[json::json_pointer("/" + s.substr(0, eq))] = v;
  }
  return j;
}

pipeline::PipelineConfig buildConfig(const std::string & path, const std::vector<std::string> & sets)
{
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorCode::kIo, "cannot open config " + path);
    }
    try {
      j = json::parse(in);
    } catch (const json::exception & e) {
      throw Error(ErrorCode::kConfig, path + ": " + e.what());
    }
  }
  j.merge_patch(overrides(sets));
  auto config = pipeline::configFromJson(j);
  pipeline::applyEnvironment(config);
  return config;
}

data::LabelMap readLabelDir(const fs::path & dir, std::size_t frames)
{
  data::LabelMap out;
  for (std::size_t f = 0; f < frames; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.label", f);
    out.push_back(data::readLabelFile(dir / name));
  }
  return out;
}

std::size_t countLabelFiles(const fs::path & dir)
{
  std::size_t n = 0;
  for (const auto & e : fs::directory_iterator(dir)) {
    n += e.path().extension() == ".label";
  }
  return n;
}

pipeline::AnnotationService * g_service = nullptr;

void onSignal(int)
{
  if (g_service != nullptr) {
    g_service->stop();
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"LiDAR presegmentation pipeline and annotation backend"};
  app.require_subcommand(1);

  // ingest
  auto * ingest = app.add_subcommand("ingest", "Check a sequence, or generate the synthetic scene");
  std::string ingest_manifest;
  std::string synthetic_dir;
  std::uint64_t synthetic_seed = 0;
  std::uint32_t synthetic_frames = 40;
  ingest->add_option("--manifest", ingest_manifest, "Sequence manifest to check");
  ingest->add_option("--synthetic", synthetic_dir, "Write the synthetic scene and its config here");
  ingest->add_option("--seed", synthetic_seed, "Synthetic scene noise seed");
  ingest->add_option("--frames", synthetic_frames, "Synthetic scene length");

  // presegment
  auto * preseg = app.add_subcommand("presegment", "Run the full presegmentation");
  std::string config_path;
  std::vector<std::string> sets;
  std::string manifest;
  std::string output;
  std::string backend;
  preseg->add_option("--config", config_path, "Config file (JSON)");
  preseg->add_option("--manifest", manifest, "Overrides manifest");
  preseg->add_option("--output", output, "Overrides output_dir");
  preseg->add_option("--backend", backend, "Overrides segmenter/backend: mock or remote:<url>");
  preseg->add_option("--set", sets, "Any config key, e.g. --set aggregation/voxel_edge=0.2");
  bool quiet = false;
  preseg->add_flag("--quiet", quiet, "No progress output");

  // serve
  auto * serve = app.add_subcommand("serve", "Serve the annotation API");
  std::vector<std::string> sequences;
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--sequence", sequences, "name=<manifest>,<output dir>")->required();
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--config", config_path, "Config used by presegment jobs");
  serve->add_option("--set", sets, "Config overrides for presegment jobs");

  // eval
  auto * evaluate = app.add_subcommand("eval", "Score labels against ground truth");
  std::string pred_dir;
  std::string gt_dir;
  std::vector<std::uint16_t> things;
  std::string csv;
  evaluate->add_option("--pred", pred_dir, "Directory of predicted .label files")->required();
  evaluate->add_option("--gt", gt_dir, "Directory of ground-truth .label files")->required();
  evaluate->add_option("--things", things, "Thing class ids (default: the usual LiDAR benchmark set)");
  evaluate->add_option("--csv", csv, "Per-class rows to this file");

  // export
  auto * exporter = app.add_subcommand("export", "Render keyframe pseudo-images to PNG");
  std::string export_dir;
  std::string rig_path;
  exporter->add_option("--config", config_path, "Config file (JSON)");
  exporter->add_option("--set", sets, "Config overrides");
  exporter->add_option("--manifest", manifest, "Overrides manifest");
  exporter->add_option("--rig", rig_path, "rig.json from a presegment run");
  exporter->add_option("--output", export_dir, "PNG directory")->required();

  // config
  auto * cfg = app.add_subcommand("config", "Print or check configuration");
  bool dump_defaults = false;
  std::string check_path;
  cfg->add_flag("--dump-defaults", dump_defaults, "Print every key with its default");
  cfg->add_option("--check", check_path, "Validate a config file");

  // fit-metric
  auto * fit = app.add_subcommand("fit-metric", "Fit a domain metric model");
  std::string corpus_dir;
  std::string model_out;
  int dead_leaves = 0;
  alignment::MetricFitParams fit_params;
  fit->add_option("--corpus", corpus_dir, "Directory of PNG reference images");
  fit->add_option("--dead-leaves", dead_leaves, "Generate this many dead-leaves images instead");
  fit->add_option("--clusters", fit_params.clusters);
  fit->add_option("--bins", fit_params.bins);
  fit->add_option("--crop-width", fit_params.crop_width);
  fit->add_option("--crop-height", fit_params.crop_height);
  fit->add_option("--seed", fit_params.seed);
  fit->add_option("--output", model_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      if (!synthetic_dir.empty()) {
        auto params = pipeline::SyntheticSceneParams::standard();
        params.seed = synthetic_seed;
        params.frames = synthetic_frames;
        const auto scene = pipeline::makeSyntheticScene(params);
        const auto path = pipeline::writeSyntheticScene(scene, synthetic_dir);
        auto config = pipeline::syntheticSceneConfig();
        config.manifest = path.string();
        config.output_dir = (fs::absolute(synthetic_dir) / "out").string();
        data::writeFileAtomic(fs::path(synthetic_dir) / "config.json", pipeline::toJson(config).dump(2));
        std::cout << "manifest=" << path.string() << "\nconfig=" << (fs::path(synthetic_dir) / "config.json").string()
                  << "\nframes=" << scene.frames.size() << '\n';
        return 0;
      }
      if (ingest_manifest.empty()) {
        throw Error(ErrorCode::kConfig, "ingest needs --manifest or --synthetic");
      }
      const auto seq = pipeline::loadSequence(ingest_manifest);
      std::size_t points = 0;
      for (const auto & f : seq.frames) {
        points += f.points.size();
      }
      std::cout << "frames=" << seq.frames.size() << "\npoints=" << points << '\n';
      return 0;
    }

    if (*preseg) {
      auto config = buildConfig(config_path, sets);
      if (!manifest.empty()) {
        config.manifest = manifest;
      }
      if (!output.empty()) {
        config.output_dir = output;
      }
      if (!backend.empty()) {
        config.segmenter.backend = backend;
      }
      pipeline::validate(config);
      const auto result = pipeline::runPresegment(config, [&](const pipeline::ProgressEvent & e) {
        if (!quiet) {
          std::fprintf(stderr, "[%5.1f%%] %s %s\n", 100.0 * e.fraction, e.stage.c_str(), e.message.c_str());
        }
      });
      std::cout << "frames=" << result.labels.size() << "\nsegments=" << result.tracks.size()
                << "\noutput=" << config.output_dir << '\n';
      return 0;
    }

    if (*serve) {
      pipeline::AnnotationService service(buildConfig(config_path, sets));
      for (const auto & s : sequences) {
        const auto eq = s.find('=');
        const auto comma = s.find(',', eq);
        if (eq == std::string::npos || comma == std::string::npos) {
          throw Error(ErrorCode::kConfig, "--sequence expects name=<manifest>,<output dir>");
        }
        service.addSequence({s.substr(0, eq), s.substr(eq + 1, comma - eq - 1), s.substr(comma + 1)});
      }
      g_service = &service;
      std::signal(SIGINT, onSignal);
      std::signal(SIGTERM, onSignal);
      std::fprintf(stderr, "serving on %s:%d\n", host.c_str(), port);
      service.listen(host, port);
      g_service = nullptr;
      return 0;
    }

    if (*evaluate) {
      const auto frames = countLabelFiles(gt_dir);
      const auto gt = readLabelDir(gt_dir, frames);
      const auto pred = readLabelDir(pred_dir, frames);
      const auto classes = things.empty() ? eval::ClassSpec::lidarDefaults()
                                          : eval::ClassSpec{{things.begin(), things.end()}};
      const auto aligned = eval::applyAlignment(pred, eval::semanticOracleAlign(pred, gt), classes);
      const auto pq = eval::panopticQuality(aligned, gt, classes);
      eval::writeKeyValue(std::cout, pq);
      eval::writeKeyValue(std::cout, eval::lstq(pred, aligned, gt, classes));
      if (!csv.empty()) {
        std::ofstream out(csv);
        eval::writeRows(out, pq);
      }
      return 0;
    }

    if (*exporter) {
      auto config = buildConfig(config_path, sets);
      if (!manifest.empty()) {
        config.manifest = manifest;
      }
      auto rig = pipeline::configuredRig(config.alignment);
      if (!rig_path.empty()) {
        std::ifstream in(rig_path);
        const auto j = json::parse(in);
        rig.t = j.at("t").get<double>();
        rig.alpha = j.at("alpha").get<double>();
        rig.primary = j.at("primary").get<int>();
      }
      const auto seq = pipeline::loadSequence(config.manifest);
      const auto grids = pipeline::keyframeGrids(seq, config);
      alignment::exportVideoPng(alignment::renderSequence(rig, grids, config.alignment.color), export_dir);
      std::cout << "keyframes=" << grids.size() << "\noutput=" << export_dir << '\n';
      return 0;
    }

    if (*cfg) {
      if (!check_path.empty()) {
        pipeline::loadConfig(check_path);
        std::cout << "ok\n";
        return 0;
      }
      if (dump_defaults) {
        std::cout << pipeline::toJson(pipeline::PipelineConfig{}).dump(2) << '\n';
        return 0;
      }
      throw Error(ErrorCode::kConfig, "config needs --dump-defaults or --check");
    }

    if (*fit) {
      std::vector<alignment::GrayImage> corpus;
      if (dead_leaves > 0) {
        corpus = alignment::deadLeavesCorpus(dead_leaves, fit_params.crop_width, fit_params.crop_height, fit_params.seed);
      } else if (!corpus_dir.empty()) {
        corpus = alignment::loadCorpus(corpus_dir);
      } else {
        throw Error(ErrorCode::kConfig, "fit-metric needs --corpus or --dead-leaves");
      }
      const auto model = alignment::fitMetricModel(corpus, fit_params);
      alignment::saveMetricModel(model, model_out);
      std::cout << "images=" << corpus.size() << "\ncenters=" << model.centers.size()
                << "\nfingerprint=" << model.fingerprint << '\n';
      return 0;
    }
  } catch (const StageError & e) {
    std::fprintf(stderr, "error in stage %s: %s\n", e.stage().c_str(), e.what());
    return 2;
  } catch (const Error & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
