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

#ifndef REPCOUNT_COUNTING_HPP_
#define REPCOUNT_COUNTING_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repcount {

struct FramePrediction {
  double periodicity = 0.0;
  double period_len = 2.0;  // variant-timebase frames
  double period_score = 0.0;
};

struct PredictionTrack {
  std::string video_id;
  int speed = 1;
  int window_size = 64;
  std::vector<FramePrediction> frames;
};

enum class CountingMode { segmented, gated };

// What to do with frames after the last full window.
enum class TailPolicy { drop, keep };

struct CountingConfig {
  double tau = 0.5;
  CountingMode mode = CountingMode::gated;
  bool pad_short = false;
  TailPolicy tail = TailPolicy::drop;
  bool keep_per_frame_counts = false;
};

struct CountEstimate {
  std::string video_id;
  double count = 0.0;
  int speed_chosen = 1;
  double period_score_mean = 0.0;
  std::optional<std::vector<double>> per_frame_counts;
};

std::string_view to_string(CountingMode mode);
std::string_view to_string(TailPolicy tail);
CountingMode parse_counting_mode(std::string_view text);
TailPolicy parse_tail_policy(std::string_view text);

void validate_config(const CountingConfig& config);
void validate_frame(const FramePrediction& fp, int window_size);
void validate_track(const PredictionTrack& track);

/// Eq. 3 term for one frame: 1(sqrt(p * s) > tau) / l in gated mode,
/// 1 / l in segmented mode.
double per_frame_count(const FramePrediction& fp, const CountingConfig& config);

/// Consecutive non-overlapping windows starting at frame 0. A short tail is
/// dropped or kept as a final partial window according to config.tail.
/// Tracks shorter than one window are padded with their last frame when
/// pad_short is set.
std::vector<std::vector<FramePrediction>> window_partition(const PredictionTrack& track,
                                                           const CountingConfig& config = {});

CountEstimate count_track(const PredictionTrack& track, const CountingConfig& config);

/// Mean period_score over the frames that survive windowing.
double track_period_score(const PredictionTrack& track, const CountingConfig& config = {});

}  // namespace repcount

#endif  // REPCOUNT_COUNTING_HPP_
