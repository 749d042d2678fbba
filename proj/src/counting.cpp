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

#include "repcount/counting.hpp"

#include <cmath>
#include <string>

#include "repcount/error.hpp"
#include "repcount/sum.hpp"

namespace repcount {

std::string_view to_string(CountingMode mode) {
  return mode == CountingMode::segmented ? "segmented" : "gated";
}

std::string_view to_string(TailPolicy tail) { return tail == TailPolicy::drop ? "drop" : "keep"; }

CountingMode parse_counting_mode(std::string_view text) {
  if (text == "segmented") return CountingMode::segmented;
  if (text == "gated" || text == "gapped") return CountingMode::gated;
  throw ValidationError("unknown counting mode '" + std::string(text) +
                        "' (allowed: segmented, gated, gapped)");
}

TailPolicy parse_tail_policy(std::string_view text) {
  if (text == "drop") return TailPolicy::drop;
  if (text == "keep") return TailPolicy::keep;
  throw ValidationError("unknown tail policy '" + std::string(text) + "' (allowed: drop, keep)");
}

void validate_config(const CountingConfig& config) {
  if (!(config.tau >= 0.0 && config.tau <= 1.0)) {
    throw ValidationError("tau must lie in [0, 1], got " + std::to_string(config.tau));
  }
}

void validate_frame(const FramePrediction& fp, int window_size) {
  if (!(fp.periodicity >= 0.0 && fp.periodicity <= 1.0)) {
    throw ValidationError("periodicity must lie in [0, 1], got " + std::to_string(fp.periodicity));
  }
  if (!(fp.period_score >= 0.0 && fp.period_score <= 1.0)) {
    throw ValidationError("period_score must lie in [0, 1], got " + std::to_string(fp.period_score));
  }
  if (!(fp.period_len >= 2.0)) {
    throw ValidationError("period_len must be >= 2, got " + std::to_string(fp.period_len));
  }
  if (window_size > 0 && fp.period_len > window_size / 2) {
    throw ValidationError("period_len " + std::to_string(fp.period_len) + " exceeds window_size/2 = " +
                          std::to_string(window_size / 2));
  }
}

void validate_track(const PredictionTrack& track) {
  const std::string who = "track '" + track.video_id + "'";
  if (track.speed < 1) throw ValidationError(who + ": speed must be >= 1");
  if (track.window_size < 4 || track.window_size % 2 != 0) {
    throw ValidationError(who + ": window_size must be even and >= 4, got " +
                          std::to_string(track.window_size));
  }
  if (track.frames.empty()) throw ValidationError(who + ": empty track");
  for (std::size_t i = 0; i < track.frames.size(); ++i) {
    try {
      validate_frame(track.frames[i], track.window_size);
    } catch (const ValidationError& e) {
      throw ValidationError(who + ", frame " + std::to_string(i) + ": " + e.what());
    }
  }
}

double per_frame_count(const FramePrediction& fp, const CountingConfig& config) {
  if (!(fp.period_len >= 2.0)) {
    throw ValidationError("invariant violation: period_len must be >= 2, got " +
                          std::to_string(fp.period_len));
  }
  if (config.mode == CountingMode::gated &&
      !(std::sqrt(fp.periodicity * fp.period_score) > config.tau)) {
    return 0.0;
  }
  return 1.0 / fp.period_len;
}

std::vector<std::vector<FramePrediction>> window_partition(const PredictionTrack& track,
                                                           const CountingConfig& config) {
  validate_track(track);
  const std::size_t w = static_cast<std::size_t>(track.window_size);
  const std::vector<FramePrediction>& f = track.frames;
  std::vector<std::vector<FramePrediction>> windows;
  if (f.size() < w) {
    if (config.pad_short) {
      std::vector<FramePrediction> padded(f);
      padded.resize(w, f.back());
      windows.push_back(std::move(padded));
    } else if (config.tail == TailPolicy::keep) {
      windows.push_back(f);
    } else {
      throw ValidationError("track too short: '" + track.video_id + "' has " + std::to_string(f.size()) +
                            " frames, window_size is " + std::to_string(w) + " (set pad_short)");
    }
    return windows;
  }
  std::size_t start = 0;
  for (; start + w <= f.size(); start += w) {
    windows.emplace_back(f.begin() + start, f.begin() + start + w);
  }
  if (start < f.size() && config.tail == TailPolicy::keep) {
    windows.emplace_back(f.begin() + start, f.end());
  }
  return windows;
}

CountEstimate count_track(const PredictionTrack& track, const CountingConfig& config) {
  validate_config(config);
  const auto windows = window_partition(track, config);
  CompensatedSum count;
  CompensatedSum score;
  std::size_t n = 0;
  CountEstimate out;
  out.video_id = track.video_id;
  out.speed_chosen = track.speed;
  if (config.keep_per_frame_counts) out.per_frame_counts.emplace();
  for (const auto& window : windows) {
    for (const FramePrediction& fp : window) {
      const double c = per_frame_count(fp, config);
      count.add(c);
      score.add(fp.period_score);
      ++n;
      if (out.per_frame_counts) out.per_frame_counts->push_back(c);
    }
  }
  out.count = count.value();
  out.period_score_mean = score.value() / static_cast<double>(n);
  return out;
}

double track_period_score(const PredictionTrack& track, const CountingConfig& config) {
  const auto windows = window_partition(track, config);
  CompensatedSum score;
  std::size_t n = 0;
  for (const auto& window : windows) {
    for (const FramePrediction& fp : window) {
      score.add(fp.period_score);
      ++n;
    }
  }
  if (n == 0) throw ValidationError("no frames retained after windowing");
  return score.value() / static_cast<double>(n);
}

}  // namespace repcount
