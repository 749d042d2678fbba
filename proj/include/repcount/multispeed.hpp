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

#ifndef REPCOUNT_MULTISPEED_HPP_
#define REPCOUNT_MULTISPEED_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "repcount/counting.hpp"
#include "repcount/error.hpp"

namespace repcount {

struct SpeedConfig {
  std::vector<int> strides{1, 2, 3, 4, 5};
};

struct SpeedScore {
  int stride = 1;
  double period_score_mean = 0.0;
  double count = 0.0;
};

struct SpeedSelection {
  int chosen_stride = 1;
  std::vector<SpeedScore> scores;  // ascending stride
};

struct MultispeedResult {
  CountEstimate estimate;
  SpeedSelection selection;
};

void validate_speed_config(const SpeedConfig& config);

/// Largest original-timebase period any configured speed can represent.
int max_representable_period(int window_size, const SpeedConfig& config);

/// Elements at 0, stride, 2*stride, ...; ceil(size/stride) of them.
template <typename T>
std::vector<T> subsample(const std::vector<T>& sequence, int stride) {
  if (stride < 1) throw ValidationError("stride must be >= 1, got " + std::to_string(stride));
  if (sequence.empty()) throw ValidationError("cannot subsample an empty sequence");
  std::vector<T> out;
  out.reserve((sequence.size() + stride - 1) / stride);
  for (std::size_t i = 0; i < sequence.size(); i += static_cast<std::size_t>(stride)) {
    out.push_back(sequence[i]);
  }
  return out;
}

/// Row-wise subsample of a frame-major matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> subsample(
    const Eigen::MatrixBase<Derived>& frames, int stride) {
  if (stride < 1) throw ValidationError("stride must be >= 1, got " + std::to_string(stride));
  if (frames.rows() == 0) throw ValidationError("cannot subsample an empty sequence");
  const Eigen::Index n = (frames.rows() + stride - 1) / stride;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, frames.cols());
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = frames.row(i * stride);
  return out;
}

/// Highest period_score_mean wins; exact ties go to the smallest stride.
SpeedSelection select_speed(const std::vector<std::pair<PredictionTrack, CountEstimate>>& candidates);

MultispeedResult multispeed_evaluate(const std::map<int, PredictionTrack>& tracks_by_stride,
                                     const CountingConfig& counting, const SpeedConfig& speeds);

CountEstimate multispeed_count(const std::map<int, PredictionTrack>& tracks_by_stride,
                               const CountingConfig& counting, const SpeedConfig& speeds);

}  // namespace repcount

#endif  // REPCOUNT_MULTISPEED_HPP_
