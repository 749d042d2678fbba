// Copyright 2026 The repcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "repcount/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "repcount/error.hpp"
#include "repcount/estimator.hpp"
#include "repcount/io.hpp"
#include "repcount/metrics.hpp"
#include "repcount/multispeed.hpp"

namespace repcount::cli {
namespace {

namespace fs = std::filesystem;

struct SynthArgs {
  SynthDatasetSpec spec;
  std::string mode = "segmented";
  std::string out_dir;
};

struct PredictArgs {
  std::string manifest;
  std::string out;
  std::vector<int> strides{1, 2, 3, 4, 5};
  int window = 64;
};

struct CountArgs {
  std::string predictions;
  std::string manifest;
  std::string out;
  std::string mode;
  std::string tail = "keep";
  std::vector<int> strides{1, 2, 3, 4, 5};
  double tau = 0.5;
  bool pad_short = false;
  bool per_frame = false;
};

struct EvalArgs {
  std::string manifest;
  std::string estimates;
  std::string out;
  std::string table;
  std::string label = "repcount";
  double alpha = 0.0;
  bool round = false;
};

struct AuditArgs {
  std::string manifest;
  std::string estimates;
  std::string out;
  std::vector<double> alphas{0.0, 0.1};
  bool round = false;
};

struct ReportArgs {
  std::vector<std::string> results;
  std::vector<std::string> labels;
  std::string out;
};

std::string resolve(const std::string& base_file, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (fs::path(base_file).parent_path() / p).lexically_normal().string();
}

template <typename Reader>
auto read_jsonl(const std::string& path, Reader reader) {
  const std::string text = io::read_text_file(path);
  std::istringstream in(text);
  return reader(in, path);
}

std::vector<io::ManifestEntry> load_manifest(const std::string& path) {
  const std::string text = io::read_text_file(path);
  try {
    return io::parse_manifest(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw ValidationError("--alpha must be finite and >= 0, got " + io::format_double(alpha));
  }
}

int do_synth(const SynthArgs& a, std::ostream& out) {
  SynthDatasetSpec spec = a.spec;
  spec.gapped = io::parse_dataset_mode(a.mode) == io::DatasetMode::gapped;
  validate_dataset_spec(spec);
  const auto videos = synth_dataset(spec);

  std::vector<io::ManifestEntry> manifest;
  std::ostringstream emb;
  for (const SynthVideo& v : videos) {
    auto [e, truth] = synth_periodic(v.spec, v.video_id);
    io::write_embeddings({e}, emb);
    manifest.push_back({v.video_id, truth.gt_count,
                        spec.gapped ? io::DatasetMode::gapped : io::DatasetMode::segmented,
                        std::string("embeddings.jsonl"), std::nullopt});
  }
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + a.out_dir + "': " + ec.message());
  const std::string mpath = (fs::path(a.out_dir) / "manifest.csv").string();
  const std::string epath = (fs::path(a.out_dir) / "embeddings.jsonl").string();
  io::write_text_file(epath, emb.str());
  io::write_text_file(mpath, io::write_manifest(manifest));
  out << "wrote " << videos.size() << " videos to " << mpath << "\n";
  return kExitOk;
}

int do_predict(const PredictArgs& a, std::ostream& out) {
  validate_speed_config(SpeedConfig{a.strides});
  PeriodEstimator<double> check(a.window);
  (void)check;
  const auto manifest = load_manifest(a.manifest);

  std::map<std::string, std::unordered_map<std::string, EmbeddingSequence>> files;
  std::vector<PredictionTrack> records;
  for (const io::ManifestEntry& m : manifest) {
    if (!m.embedding_path) continue;
    const std::string path = resolve(a.manifest, *m.embedding_path);
    auto [it, fresh] = files.try_emplace(path);
    if (fresh) {
      for (auto& e : read_jsonl(path, [](std::istream& in, const std::string& src) {
             return io::read_embeddings(in, src);
           })) {
        std::string id = e.video_id;
        it->second.emplace(std::move(id), std::move(e));
      }
    }
    auto found = it->second.find(m.video_id);
    if (found == it->second.end()) {
      throw ValidationError(path + ": no embeddings for video '" + m.video_id + "'");
    }
    for (int s : a.strides) records.push_back(predict_track(found->second, s, a.window));
  }
  if (records.empty()) throw ValidationError(a.manifest + ": no entries with an embedding_path");
  std::ostringstream buf;
  io::write_predictions(records, buf);
  io::write_text_file(a.out, buf.str());
  out << "wrote " << records.size() << " prediction records to " << a.out << "\n";
  return kExitOk;
}

int do_count(const CountArgs& a, std::ostream& out) {
  CountingConfig base;
  base.tau = a.tau;
  base.tail = parse_tail_policy(a.tail);
  base.pad_short = a.pad_short;
  base.keep_per_frame_counts = a.per_frame;
  validate_config(base);
  const SpeedConfig speeds{a.strides};
  validate_speed_config(speeds);
  std::optional<CountingMode> forced;
  if (!a.mode.empty()) forced = parse_counting_mode(a.mode);
  if (a.manifest.empty() && a.predictions.empty()) {
    throw ValidationError("count needs --predictions, --manifest or both");
  }
  if (!forced && a.manifest.empty()) throw ValidationError("count needs --mode when no --manifest is given");

  std::vector<io::ManifestEntry> manifest;
  if (!a.manifest.empty()) manifest = load_manifest(a.manifest);

  std::vector<PredictionTrack> records;
  auto load = [&](const std::string& path) {
    for (auto& r : read_jsonl(path, [](std::istream& in, const std::string& src) {
           return io::read_predictions(in, src);
         })) {
      records.push_back(std::move(r));
    }
  };
  if (!a.predictions.empty()) {
    load(a.predictions);
  } else {
    std::set<std::string> loaded;
    for (const io::ManifestEntry& m : manifest) {
      if (!m.prediction_path) {
        throw ValidationError(a.manifest + ": video '" + m.video_id + "' has no prediction_path (pass --predictions)");
      }
      const std::string path = resolve(a.manifest, *m.prediction_path);
      if (loaded.insert(path).second) load(path);
    }
  }

  std::vector<std::string> order;
  std::unordered_map<std::string, std::map<int, PredictionTrack>> by_video;
  for (PredictionTrack& r : records) {
    auto [it, fresh] = by_video.try_emplace(r.video_id);
    if (fresh) order.push_back(r.video_id);
    const int s = r.speed;
    if (!it->second.emplace(s, std::move(r)).second) {
      throw ValidationError("duplicate predictions for video '" + it->first + "' at stride " + std::to_string(s));
    }
  }
  std::unordered_map<std::string, CountingMode> modes;
  if (!manifest.empty()) {
    order.clear();
    for (const io::ManifestEntry& m : manifest) {
      order.push_back(m.video_id);
      modes[m.video_id] = io::counting_mode_for(m.mode);
    }
  }

  std::vector<io::EstimateRecord> estimates;
  for (const std::string& id : order) {
    auto it = by_video.find(id);
    if (it == by_video.end()) throw ValidationError("no predictions for video '" + id + "'");
    CountingConfig cfg = base;
    cfg.mode = forced ? *forced : modes.at(id);
    MultispeedResult res;
    try {
      res = multispeed_evaluate(it->second, cfg, speeds);
    } catch (const ValidationError& e) {
      throw ValidationError("video '" + id + "': " + e.what());
    }
    estimates.push_back({res.estimate, res.selection.scores, it->second.begin()->second.window_size, cfg.tau,
                         cfg.mode, cfg.tail, cfg.pad_short});
  }
  std::ostringstream buf;
  io::write_estimates(estimates, buf);
  io::write_text_file(a.out, buf.str());
  out << "wrote " << estimates.size() << " estimates to " << a.out << "\n";
  return kExitOk;
}

struct Joined {
  std::vector<CountPair> pairs;
  std::vector<io::EstimateRecord> estimates;
};

Joined join(const std::string& manifest_path, const std::string& estimates_path) {
  const auto manifest = load_manifest(manifest_path);
  auto records = read_jsonl(estimates_path, [](std::istream& in, const std::string& src) {
    return io::read_estimates(in, src);
  });
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].estimate.video_id, i);
  Joined j;
  for (const io::ManifestEntry& m : manifest) {
    auto it = index.find(m.video_id);
    if (it == index.end()) throw ValidationError(estimates_path + ": no estimate for video '" + m.video_id + "'");
    j.pairs.push_back({m.video_id, m.gt_count, records[it->second].estimate.count});
    j.estimates.push_back(records[it->second]);
  }
  if (records.size() != manifest.size()) {
    throw ValidationError(estimates_path + ": " + std::to_string(records.size() - manifest.size()) +
                          " estimates have no manifest entry");
  }
  return j;
}

io::ResultsConfig echo_config(const std::vector<io::EstimateRecord>& est, double alpha, bool round) {
  io::ResultsConfig c;
  c.alpha = alpha;
  c.round_predictions = round;
  const io::EstimateRecord& f = est.front();
  c.tau = f.tau;
  c.window = f.window_size;
  c.tail = std::string(to_string(f.tail));
  c.mode = std::string(to_string(f.mode));
  c.strides.clear();
  for (const SpeedScore& s : f.candidates) c.strides.push_back(s.stride);
  for (const io::EstimateRecord& r : est) {
    if (r.tau != f.tau || r.window_size != f.window_size || r.tail != f.tail) {
      throw ValidationError("estimates were produced with different tau, window or tail settings ('" +
                            f.estimate.video_id + "' vs '" + r.estimate.video_id + "')");
    }
    if (r.mode != f.mode) c.mode = "mixed";
  }
  return c;
}

int do_eval(const EvalArgs& a, std::ostream& out) {
  require_alpha(a.alpha);
  const Joined j = join(a.manifest, a.estimates);
  const MetricConfig mc{a.alpha, a.round};
  const MetricReport report = build_report(j.pairs, mc);
  std::vector<CountEstimate> est;
  for (const auto& r : j.estimates) est.push_back(r.estimate);
  const auto written = io::write_results(report, est, echo_config(j.estimates, a.alpha, a.round), a.label);
  io::write_text_file(a.out, written.json);
  if (!a.table.empty()) io::write_text_file(a.table, written.table);
  out << written.table;
  return kExitOk;
}

int do_audit(const AuditArgs& a, std::ostream& out) {
  if (a.alphas.empty()) throw ValidationError("--alphas must list at least one value");
  for (double alpha : a.alphas) require_alpha(alpha);
  const Joined j = join(a.manifest, a.estimates);
  const auto sweep = alpha_sweep(j.pairs, a.alphas, a.round);
  std::string text = "| α | MAE |\n| ---: | ---: |\n";
  for (const auto& [alpha, value] : sweep) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    text += "| " + io::format_alpha(alpha) + " | " + buf + " |\n";
  }
  if (!a.out.empty()) io::write_text_file(a.out, text);
  out << text;
  return kExitOk;
}

int do_report(const ReportArgs& a, std::ostream& out) {
  if (!a.labels.empty() && a.labels.size() != a.results.size()) {
    throw ValidationError("--labels lists " + std::to_string(a.labels.size()) + " names for " +
                          std::to_string(a.results.size()) + " results files");
  }
  std::vector<io::ResultsDocument> docs;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    docs.push_back(io::parse_results(io::read_text_file(a.results[i]), a.results[i]));
    labels.push_back(a.labels.empty() ? fs::path(a.results[i]).stem().string() : a.labels[i]);
  }
  const std::string table = io::render_table(docs, labels);
  if (!a.out.empty()) io::write_text_file(a.out, table);
  out << table;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repetition-counting evaluation engine", "repcount"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic manifest and embeddings");
  s->add_option("--videos", synth.spec.videos, "Number of videos")->capture_default_str();
  s->add_option("--seed", synth.spec.seed, "Dataset seed")->capture_default_str();
  s->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  s->add_option("--mode", synth.mode, "segmented or gapped")->capture_default_str();
  s->add_option("--min-period", synth.spec.min_period)->capture_default_str();
  s->add_option("--max-period", synth.spec.max_period)->capture_default_str();
  s->add_option("--min-frames", synth.spec.min_frames)->capture_default_str();
  s->add_option("--max-frames", synth.spec.max_frames)->capture_default_str();
  s->add_option("--dims", synth.spec.dims)->capture_default_str();
  s->add_option("--noise", synth.spec.max_noise, "Largest noise sigma")->capture_default_str();
  s->add_option("--min-gap", synth.spec.min_gap_fraction)->capture_default_str();
  s->add_option("--max-gap", synth.spec.max_gap_fraction)->capture_default_str();

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Run the reference estimator at every stride");
  p->add_option("--manifest", predict.manifest)->required();
  p->add_option("--out", predict.out, "Predictions file")->required();
  p->add_option("--strides", predict.strides)->delimiter(',')->capture_default_str();
  p->add_option("--window", predict.window)->capture_default_str();

  CountArgs count;
  auto* c = app.add_subcommand("count", "Gated counting and speed selection");
  c->add_option("--predictions", count.predictions);
  c->add_option("--manifest", count.manifest);
  c->add_option("--out", count.out, "Estimates file")->required();
  c->add_option("--mode", count.mode, "segmented or gated (default: from the manifest)");
  c->add_option("--tau", count.tau)->capture_default_str();
  c->add_option("--strides", count.strides)->delimiter(',')->capture_default_str();
  c->add_option("--tail", count.tail, "keep or drop")->capture_default_str();
  c->add_flag("--pad-short", count.pad_short);
  c->add_flag("--per-frame", count.per_frame, "Store per-frame counts");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Metrics from estimates and a manifest");
  e->add_option("--manifest", eval.manifest)->required();
  e->add_option("--estimates", eval.estimates)->required();
  e->add_option("--out", eval.out, "Results document")->required();
  e->add_option("--table", eval.table, "Markdown table output");
  e->add_option("--label", eval.label)->capture_default_str();
  e->add_option("--alpha", eval.alpha)->capture_default_str();
  e->add_flag("--round", eval.round, "Round predicted counts before metrics");

  AuditArgs audit;
  auto* a = app.add_subcommand("audit-alpha", "MAE at several alphas");
  a->add_option("--manifest", audit.manifest)->required();
  a->add_option("--estimates", audit.estimates)->required();
  a->add_option("--alphas", audit.alphas)->delimiter(',')->capture_default_str();
  a->add_option("--out", audit.out);
  a->add_flag("--round", audit.round);

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Render results documents as one table");
  r->add_option("--results", report.results)->required();
  r->add_option("--labels", report.labels)->delimiter(',');
  r->add_option("--out", report.out);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n" << app.help();
    return kExitValidation;
  }

  try {
    if (s->parsed()) return do_synth(synth, out);
    if (p->parsed()) return do_predict(predict, out);
    if (c->parsed()) return do_count(count, out);
    if (e->parsed()) return do_eval(eval, out);
    if (a->parsed()) return do_audit(audit, out);
    if (r->parsed()) return do_report(report, out);
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitValidation;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace repcount::cli
