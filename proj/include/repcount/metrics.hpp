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

#ifndef REPCOUNT_METRICS_HPP_
#define REPCOUNT_METRICS_HPP_

#include <string>
#include <utility>
#include <vector>

namespace repcount {

struct CountPair {
  std::string video_id;
  double gt_count = 0.0;
  double pred_count = 0.0;
};

struct MetricConfig {
  double alpha = 0.0;
  bool round_predictions = false;
};

struct PerVideoMetric {
  std::string video_id;
  double gt = 0.0;
  double pred = 0.0;     // as supplied, before optional rounding
  double abs_err = 0.0;  // after optional rounding
  bool within_one = false;
};

struct MetricReport {
  int n_videos = 0;
  double oboa = 0.0;
  double oboe = 0.0;
  double mae = 0.0;
  double alpha_used = 0.0;
  std::vector<PerVideoMetric> per_video;
};

// Throws ValidationError on empty sets, duplicate or empty ids, and
// negative or non-finite counts.
void validate_pairs(const std::vector<CountPair>& pairs);
void validate_config(const MetricConfig& config);

/// True when |gt - pred| <= 1 in exact arithmetic. The boundary is inclusive.
bool within_one(double gt, double pred);

double oboa(const std::vector<CountPair>& pairs, const MetricConfig& config = {});
/// Complement of oboa(); oboa + oboe == 1 exactly.
double oboe(const std::vector<CountPair>& pairs, const MetricConfig& config = {});
/// Mean of |gt - pred| / (alpha + gt). alpha == 0 with a zero ground truth
/// is an error, never a skip.
double mae(const std::vector<CountPair>& pairs, const MetricConfig& config = {});

std::vector<std::pair<double, double>> alpha_sweep(const std::vector<CountPair>& pairs,
                                                   const std::vector<double>& alphas,
                                                   bool round_predictions = false);

MetricReport build_report(const std::vector<CountPair>& pairs, const MetricConfig& config);

}  // namespace repcount

#endif  // REPCOUNT_METRICS_HPP_
