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

#include "repcount/multispeed.hpp"

#include <algorithm>
#include <set>

namespace repcount {

void validate_speed_config(const SpeedConfig& config) {
  if (config.strides.empty()) throw ValidationError("strides must not be empty");
  std::set<int> seen;
  for (int s : config.strides) {
    if (s < 1) throw ValidationError("strides must be positive, got " + std::to_string(s));
    if (!seen.insert(s).second) throw ValidationError("duplicate stride " + std::to_string(s));
  }
}

int max_representable_period(int window_size, const SpeedConfig& config) {
  validate_speed_config(config);
  return (window_size / 2) * *std::max_element(config.strides.begin(), config.strides.end());
}

SpeedSelection select_speed(const std::vector<std::pair<PredictionTrack, CountEstimate>>& candidates) {
  if (candidates.empty()) throw ValidationError("select_speed: no candidates");
  SpeedSelection sel;
  std::set<int> seen;
  for (const auto& [track, estimate] : candidates) {
    if (!seen.insert(track.speed).second) {
      throw ValidationError("select_speed: duplicate stride " + std::to_string(track.speed));
    }
    sel.scores.push_back({track.speed, estimate.period_score_mean, estimate.count});
  }
  std::sort(sel.scores.begin(), sel.scores.end(),
            [](const SpeedScore& a, const SpeedScore& b) { return a.stride < b.stride; });
  const SpeedScore* best = &sel.scores.front();
  for (const SpeedScore& s : sel.scores) {
    if (s.period_score_mean > best->period_score_mean) best = &s;
  }
  sel.chosen_stride = best->stride;
  return sel;
}

MultispeedResult multispeed_evaluate(const std::map<int, PredictionTrack>& tracks_by_stride,
                                     const CountingConfig& counting, const SpeedConfig& speeds) {
  validate_speed_config(speeds);
  std::vector<std::pair<PredictionTrack, CountEstimate>> candidates;
  const PredictionTrack* first = nullptr;
  for (int s : speeds.strides) {
    auto it = tracks_by_stride.find(s);
    if (it == tracks_by_stride.end()) {
      throw ValidationError("missing predictions for stride " + std::to_string(s));
    }
    const PredictionTrack& t = it->second;
    if (t.speed != s) {
      throw ValidationError("track keyed by stride " + std::to_string(s) + " declares speed " +
                            std::to_string(t.speed));
    }
    if (first == nullptr) {
      first = &t;
    } else if (t.video_id != first->video_id) {
      throw ValidationError("mismatched video_id across strides: '" + first->video_id + "' vs '" +
                            t.video_id + "'");
    } else if (t.window_size != first->window_size) {
      throw ValidationError("mismatched window_size across strides for '" + t.video_id + "'");
    }
    candidates.emplace_back(t, count_track(t, counting));
  }
  MultispeedResult result;
  result.selection = select_speed(candidates);
  for (auto& [track, estimate] : candidates) {
    if (track.speed == result.selection.chosen_stride) result.estimate = std::move(estimate);
  }
  return result;
}

CountEstimate multispeed_count(const std::map<int, PredictionTrack>& tracks_by_stride,
                               const CountingConfig& counting, const SpeedConfig& speeds) {
  return multispeed_evaluate(tracks_by_stride, counting, speeds).estimate;
}

}  // namespace repcount
