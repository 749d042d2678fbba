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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "repcount/counting.hpp"
#include "repcount/estimator.hpp"
#include "repcount/io.hpp"
#include "repcount/metrics.hpp"
#include "repcount/multispeed.hpp"

namespace {

using namespace repcount;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::vector<CountPair> random_set(std::mt19937_64& rng, bool positive_gt) {
  const int n = std::uniform_int_distribution<int>(1, 50)(rng);
  std::uniform_int_distribution<int> int_count(positive_gt ? 1 : 0, 200);
  std::uniform_real_distribution<double> real_count(positive_gt ? 0.5 : 0.0, 200.0);
  std::uniform_real_distribution<double> jitter(-2.5, 2.5);
  std::bernoulli_distribution coin(0.5);
  std::vector<CountPair> out;
  for (int i = 0; i < n; ++i) {
    const double gt = coin(rng) ? int_count(rng) : real_count(rng);
    double pred;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: pred = gt; break;
      case 1: pred = gt + std::round(jitter(rng)); break;
      case 2: pred = gt + jitter(rng); break;
      default: pred = std::uniform_real_distribution<double>(0.0, 200.0)(rng);
    }
    out.push_back({"v" + std::to_string(i), gt, std::clamp(pred, 0.0, 200.0)});
  }
  return out;
}

// Per-definition recomputation in extended precision.
long double oracle_oboa(const std::vector<CountPair>& pairs) {
  long double hits = 0;
  for (const auto& p : pairs) hits += std::fabs(static_cast<long double>(p.gt_count) - p.pred_count) <= 1.0L;
  return hits / pairs.size();
}

long double oracle_mae(const std::vector<CountPair>& pairs, long double alpha) {
  long double s = 0;
  for (const auto& p : pairs) s += std::fabs(static_cast<long double>(p.gt_count) - p.pred_count) / (alpha + p.gt_count);
  return s / pairs.size();
}

Verdict oboe_identity() {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto pairs = random_set(rng, false);
    const double a = oboa(pairs);
    const double e = oboe(pairs);
    if (e != 1.0 - a || a + e != 1.0) return {false, "identity broken on random set " + std::to_string(trial)};
  }
  // Reference rows (OBOA, OBOE) at their published precision.
  const struct {
    int hits;
    const char* oboa_text;
    const char* oboe_text;
    int decimals;
  } rows[] = {{6970, "0.697", "0.303", 3}, {3924, "0.3924", "0.6076", 4}, {7047, "0.7047", "0.2953", 4},
              {6730, "0.673", "0.327", 3}};
  std::string detail;
  for (const auto& r : rows) {
    std::vector<CountPair> pairs;
    for (int i = 0; i < 10000; ++i) pairs.push_back({"v" + std::to_string(i), 10.0, i < r.hits ? 10.5 : 12.5});
    const auto report = build_report(pairs, {});
    char a[32], e[32];
    std::snprintf(a, sizeof(a), "%.*f", r.decimals, report.oboa);
    std::snprintf(e, sizeof(e), "%.*f", r.decimals, report.oboe);
    if (std::string(a) != r.oboa_text || std::string(e) != r.oboe_text || report.oboa + report.oboe != 1.0) {
      return {false, std::string("reference row ") + r.oboa_text + " gave OBOE " + e};
    }
    detail += std::string(detail.empty() ? "" : ", ") + a + "->" + e;
  }
  io::ResultsDocument doc;
  {
    std::vector<CountPair> pairs;
    for (int i = 0; i < 10000; ++i) pairs.push_back({"v" + std::to_string(i), 10.0, i < 7047 ? 10.0 : 20.0});
    doc.metrics = build_report(pairs, {});
    doc.metrics.mae = 0.3083;
  }
  const std::string table = io::render_table({doc}, {"RepNet"});
  if (table.find("0.0 | 0.3083 | 0.7047 | 0.2953") == std::string::npos) return {false, "table row mismatch"};
  return {true, "5000 random sets exact; rows " + detail + "; table row '0.0 | 0.3083 | 0.7047 | 0.2953'"};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool positive = trial % 2 == 0;
    const auto pairs = random_set(rng, positive);
    worst = std::max(worst, std::abs(oboa(pairs) - static_cast<double>(oracle_oboa(pairs))));
    worst = std::max(worst, std::abs(mae(pairs, {0.1, false}) - static_cast<double>(oracle_mae(pairs, 0.1L))));
    if (positive) worst = std::max(worst, std::abs(mae(pairs) - static_cast<double>(oracle_mae(pairs, 0.0L))));
  }
  return {worst <= 1e-12, "1000 sets, max deviation " + fmt("%.3g", worst) + " (tolerance 1e-12)"};
}

Verdict alpha_monotonicity() {
  std::mt19937_64 rng(3);
  int strict = 0, zero = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto pairs = random_set(rng, true);
    if (trial % 10 == 0) {
      for (auto& p : pairs) p.pred_count = p.gt_count;
    }
    double total = 0;
    for (const auto& p : pairs) total += std::abs(p.gt_count - p.pred_count);
    const double m0 = mae(pairs);
    const double m1 = mae(pairs, {0.1, false});
    if (total > 0) {
      if (!(m1 < m0)) return {false, "set " + std::to_string(trial) + ": MAE(0.1) >= MAE(0)"};
      ++strict;
    } else {
      if (m1 != m0 || m0 != 0.0) return {false, "set " + std::to_string(trial) + ": zero error but MAE differs"};
      ++zero;
    }
  }
  return {true, std::to_string(strict) + " sets strictly lower at alpha 0.1, " + std::to_string(zero) +
                    " zero-error sets equal"};
}

CountingConfig pipeline_config(CountingMode mode) {
  CountingConfig c;
  c.tau = 0.5;
  c.mode = mode;
  c.tail = TailPolicy::keep;
  return c;
}

MultispeedResult run_video(const EmbeddingSequence& e, const CountingConfig& cfg, const SpeedConfig& speeds) {
  std::map<int, PredictionTrack> tracks;
  for (int s : speeds.strides) tracks[s] = predict_track(e, s, 64);
  return multispeed_evaluate(tracks, cfg, speeds);
}

Verdict segmented_pipeline() {
  SynthDatasetSpec ds;
  ds.videos = 200;
  ds.seed = 4;
  const auto cfg = pipeline_config(CountingMode::segmented);
  std::vector<CountPair> pairs;
  for (const SynthVideo& v : synth_dataset(ds)) {
    const auto [e, truth] = synth_periodic(v.spec, v.video_id);
    pairs.push_back({v.video_id, truth.gt_count, run_video(e, cfg, SpeedConfig{}).estimate.count});
  }
  const double a = oboa(pairs);
  const double m = mae(pairs);
  return {a >= 0.95 && m <= 0.10, "200 videos, OBOA " + fmt("%.4f", a) + " (>= 0.95), MAE " + fmt("%.4f", m) +
                                      " (<= 0.10)"};
}

Verdict multispeed_necessity() {
  SynthSpec spec;
  spec.period = 100;
  spec.total_frames = 800;
  const auto [e, truth] = synth_periodic(spec);
  const auto cfg = pipeline_config(CountingMode::segmented);
  const double c1 = run_video(e, cfg, SpeedConfig{{1}}).estimate.count;
  const auto all = run_video(e, cfg, SpeedConfig{});
  const double c5 = all.estimate.count;
  const bool pass = std::abs(c1 - truth.gt_count) > 1 && std::abs(c5 - truth.gt_count) <= 1;
  return {pass, "period 100, truth " + fmt("%.2f", truth.gt_count) + ": stride 1 only " + fmt("%.2f", c1) +
                    ", strides 1-5 " + fmt("%.2f", c5) + " (stride " + std::to_string(all.selection.chosen_stride) +
                    ")"};
}

Verdict gap_handling() {
  SynthDatasetSpec ds;
  ds.videos = 100;
  ds.seed = 6;
  ds.gapped = true;
  ds.min_frames = 256;
  auto cfg = pipeline_config(CountingMode::gated);
  cfg.keep_per_frame_counts = true;
  std::vector<CountPair> pairs;
  int noiseless = 0;
  double leaked = 0;
  for (SynthVideo v : synth_dataset(ds)) {
    const bool clean = pairs.size() % 2 == 0;
    if (clean) v.spec.noise_sigma = 0.0;
    const auto [e, truth] = synth_periodic(v.spec, v.video_id);
    const auto r = run_video(e, cfg, SpeedConfig{});
    pairs.push_back({v.video_id, truth.gt_count, r.estimate.count});
    if (clean) {
      ++noiseless;
      const int s = r.selection.chosen_stride;
      const auto& counts = *r.estimate.per_frame_counts;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!truth.periodic_mask[i * s]) leaked += counts[i];
      }
    }
  }
  const double a = oboa(pairs);
  return {a >= 0.90 && leaked == 0.0, "100 videos, OBOA " + fmt("%.4f", a) + " (>= 0.90); gap-frame count on " +
                                          std::to_string(noiseless) + " noiseless videos " + fmt("%g", leaked) +
                                          " (exactly 0)"};
}

Verdict speed_invariance() {
  const auto cfg = pipeline_config(CountingMode::segmented);
  double worst = 0;
  int cases = 0;
  for (int s : {2, 4}) {
    for (int p = 2 * s; p <= 32; p += s) {
      SynthSpec spec;
      spec.period = p;
      spec.total_frames = 512;
      const auto [e, truth] = synth_periodic(spec);
      std::map<int, PredictionTrack> tracks{{1, predict_track(e, 1, 64)}, {s, predict_track(e, s, 64)}};
      const double c1 = multispeed_count(tracks, cfg, SpeedConfig{{1}}).count;
      const double cs = multispeed_count(tracks, cfg, SpeedConfig{{s}}).count;
      worst = std::max(worst, std::abs(c1 - cs) / std::max(std::abs(c1), 1e-300));
      ++cases;
    }
  }
  return {worst <= 1e-6, std::to_string(cases) + " (period, stride) cases, max relative difference " +
                             fmt("%.3g", worst) + " (<= 1e-6)"};
}

Verdict gate_boundary() {
  int checks = 0;
  for (double tau : {0.0, 0.25, 0.5, 1.0}) {
    CountingConfig cfg;
    cfg.tau = tau;
    cfg.mode = CountingMode::gated;
    for (double s : {1.0, 0.5, 0.25, 0.125}) {
      const double p = tau * tau / s;
      if (p > 1.0 || std::sqrt(p * s) != tau) continue;
      if (per_frame_count({p, 7.0, s}, cfg) != 0.0) return {false, "tie counted at tau " + fmt("%g", tau)};
      ++checks;
    }
    std::mt19937_64 rng(static_cast<std::uint64_t>(tau * 100) + 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const FramePrediction fp{unit(rng), 2.0 + 30.0 * unit(rng), unit(rng)};
      const double g = std::sqrt(fp.periodicity * fp.period_score);
      const double expected = g > tau ? 1.0 / fp.period_len : 0.0;
      if (per_frame_count(fp, cfg) != expected) return {false, "mismatch at tau " + fmt("%g", tau)};
      ++checks;
    }
    if (tau < 1.0 && per_frame_count({1.0, 4.0, 1.0}, cfg) != 0.25) return {false, "above-threshold frame dropped"};
  }
  return {true, std::to_string(checks) + " checks over tau in {0, 0.25, 0.5, 1}; ties give 0, above gives 1/l"};
}

Verdict round_trips() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PredictionTrack> records;
  for (int i = 0; i < 1000; ++i) {
    const int w = 2 * std::uniform_int_distribution<int>(2, 64)(rng);
    PredictionTrack r{"video_" + std::to_string(i), 1 + i % 5, w, {}};
    const int n = std::uniform_int_distribution<int>(1, 64)(rng);
    for (int k = 0; k < n; ++k) r.frames.push_back({unit(rng), 2.0 + (w / 2.0 - 2.0) * unit(rng), unit(rng)});
    records.push_back(std::move(r));
  }
  std::stringstream buf;
  io::write_predictions(records, buf);
  const auto back = io::read_predictions(buf);
  if (back.size() != records.size()) return {false, "prediction record count changed"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = back[i];
    if (a.video_id != b.video_id || a.speed != b.speed || a.window_size != b.window_size ||
        a.frames.size() != b.frames.size()) {
      return {false, "prediction record " + std::to_string(i) + " header changed"};
    }
    for (std::size_t k = 0; k < a.frames.size(); ++k) {
      if (a.frames[k].periodicity != b.frames[k].periodicity || a.frames[k].period_len != b.frames[k].period_len ||
          a.frames[k].period_score != b.frames[k].period_score) {
        return {false, "prediction record " + std::to_string(i) + " values changed"};
      }
    }
  }
  for (int i = 0; i < 1000; ++i) {
    auto pairs = random_set(rng, true);
    io::ResultsConfig cfg;
    cfg.alpha = i % 3 == 0 ? 0.0 : 0.1 * unit(rng);
    cfg.tau = unit(rng);
    cfg.round_predictions = i % 4 == 0;
    std::vector<CountEstimate> est;
    for (const auto& p : pairs) est.push_back({p.video_id, p.pred_count, 1 + i % 5, unit(rng), std::nullopt});
    const auto doc = io::make_results(build_report(pairs, {cfg.alpha, cfg.round_predictions}), est, cfg);
    const auto again = io::parse_results(io::results_to_json(doc));
    const auto& m = doc.metrics;
    const auto& n = again.metrics;
    bool same = m.n_videos == n.n_videos && m.oboa == n.oboa && m.oboe == n.oboe && m.mae == n.mae &&
                m.alpha_used == n.alpha_used && doc.speed_chosen == again.speed_chosen &&
                doc.config.alpha == again.config.alpha && doc.config.tau == again.config.tau &&
                doc.config.strides == again.config.strides && doc.config.window == again.config.window &&
                doc.config.mode == again.config.mode && doc.config.tail == again.config.tail &&
                doc.config.round_predictions == again.config.round_predictions;
    for (std::size_t k = 0; same && k < m.per_video.size(); ++k) {
      const auto& x = m.per_video[k];
      const auto& y = n.per_video[k];
      same = x.video_id == y.video_id && x.gt == y.gt && x.pred == y.pred && x.abs_err == y.abs_err &&
             x.within_one == y.within_one;
    }
    if (!same) return {false, "results document " + std::to_string(i) + " changed"};
  }
  return {true, "1000 prediction records and 1000 results documents value-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "OBOE identity", 1.0, oboe_identity},
      {2, "metric oracle equivalence", 5.0, oracle_equivalence},
      {3, "alpha monotonicity", 5.0, alpha_monotonicity},
      {4, "segmented end-to-end pipeline", 60.0, segmented_pipeline},
      {5, "multi-speed necessity", 5.0, multispeed_necessity},
      {6, "gap handling", 30.0, gap_handling},
      {7, "speed invariance", 5.0, speed_invariance},
      {8, "gate boundary", 1.0, gate_boundary},
      {9, "format round-trips", 5.0, round_trips},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.limit_s) {
      v.pass = false;
      v.detail += "; runtime over limit";
    }
    failed += !v.pass;
    std::printf("[%s] %d %s: %s [%.2fs / %.0fs]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), dt,
                c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
