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

#include "repcount/metrics.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "repcount/error.hpp"
#include "repcount/sum.hpp"

namespace repcount {
namespace {

double effective_pred(double pred, const MetricConfig& config) {
  return config.round_predictions ? std::round(pred) : pred;
}

std::string format_alpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

}  // namespace

void validate_pairs(const std::vector<CountPair>& pairs) {
  if (pairs.empty()) throw ValidationError("empty evaluation set");
  std::unordered_set<std::string> seen;
  seen.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const CountPair& p = pairs[i];
    const std::string where = "pair " + std::to_string(i) + " ('" + p.video_id + "')";
    if (p.video_id.empty()) throw ValidationError("pair " + std::to_string(i) + ": empty video_id");
    if (!seen.insert(p.video_id).second) {
      throw ValidationError(where + ": duplicate video_id");
    }
    if (!std::isfinite(p.gt_count) || p.gt_count < 0.0) {
      throw ValidationError(where + ": gt_count must be finite and >= 0");
    }
    if (!std::isfinite(p.pred_count) || p.pred_count < 0.0) {
      throw ValidationError(where + ": pred_count must be finite and >= 0");
    }
  }
}

void validate_config(const MetricConfig& config) {
  if (!std::isfinite(config.alpha) || config.alpha < 0.0) {
    throw ValidationError("alpha must be finite and >= 0, got " + format_alpha(config.alpha));
  }
}

bool within_one(double gt, double pred) {
  // Exact |pred - gt| <= 1: d + e == pred - gt with no rounding (TwoSum).
  const double d = pred - gt;
  const double bp = d - pred;
  const double e = (pred - (d - bp)) + (-gt - bp);
  if (std::abs(d) != 1.0) return std::abs(d) < 1.0;
  return d > 0 ? e <= 0.0 : e >= 0.0;
}

double oboa(const std::vector<CountPair>& pairs, const MetricConfig& config) {
  validate_pairs(pairs);
  validate_config(config);
  std::size_t hits = 0;
  for (const CountPair& p : pairs) {
    if (within_one(p.gt_count, effective_pred(p.pred_count, config))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double oboe(const std::vector<CountPair>& pairs, const MetricConfig& config) {
  return 1.0 - oboa(pairs, config);
}

double mae(const std::vector<CountPair>& pairs, const MetricConfig& config) {
  validate_pairs(pairs);
  validate_config(config);
  CompensatedSum sum;
  for (const CountPair& p : pairs) {
    const double denom = config.alpha + p.gt_count;
    if (denom == 0.0) {
      throw ValidationError("division by zero: set α>0 or filter zero-count videos (video '" +
                            p.video_id + "')");
    }
    sum.add(std::abs(p.gt_count - effective_pred(p.pred_count, config)) / denom);
  }
  return sum.value() / static_cast<double>(pairs.size());
}

std::vector<std::pair<double, double>> alpha_sweep(const std::vector<CountPair>& pairs,
                                                   const std::vector<double>& alphas,
                                                   bool round_predictions) {
  std::vector<std::pair<double, double>> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    try {
      out.emplace_back(alpha, mae(pairs, MetricConfig{alpha, round_predictions}));
    } catch (const ValidationError& e) {
      throw ValidationError("alpha=" + format_alpha(alpha) + ": " + e.what());
    }
  }
  return out;
}

MetricReport build_report(const std::vector<CountPair>& pairs, const MetricConfig& config) {
  MetricReport report;
  report.oboa = oboa(pairs, config);
  report.oboe = 1.0 - report.oboa;
  report.mae = mae(pairs, config);
  report.alpha_used = config.alpha;
  report.n_videos = static_cast<int>(pairs.size());
  report.per_video.reserve(pairs.size());
  for (const CountPair& p : pairs) {
    const double pred = effective_pred(p.pred_count, config);
    report.per_video.push_back(
        {p.video_id, p.gt_count, p.pred_count, std::abs(p.gt_count - pred), within_one(p.gt_count, pred)});
  }
  return report;
}

}  // namespace repcount
