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

#ifndef REPCOUNT_IO_HPP_
#define REPCOUNT_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/counting.hpp"
#include "repcount/estimator.hpp"
#include "repcount/metrics.hpp"
#include "repcount/multispeed.hpp"

namespace repcount::io {

enum class DatasetMode { segmented, gapped };

std::string_view to_string(DatasetMode mode);
DatasetMode parse_dataset_mode(std::string_view text);
/// segmented -> segmented counting, gapped -> gated counting.
CountingMode counting_mode_for(DatasetMode mode);

struct ManifestEntry {
  std::string video_id;
  double gt_count = 0.0;
  DatasetMode mode = DatasetMode::segmented;
  std::optional<std::string> embedding_path;
  std::optional<std::string> prediction_path;
};

inline constexpr std::string_view kManifestHeader =
    "video_id,gt_count,mode,embedding_path,prediction_path";

std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::string write_manifest(const std::vector<ManifestEntry>& entries);

// One JSON object per line:
// {"video_id", "speed", "window_size", "periodicity", "period_length", "period_score"}
using PredictionRecord = PredictionTrack;

std::vector<PredictionRecord> read_predictions(std::istream& in, std::string_view source = "<predictions>");
void write_predictions(const std::vector<PredictionRecord>& records, std::ostream& out);

// One JSON object per line: {"video_id", "dims", "rows"}.
std::vector<EmbeddingSequence> read_embeddings(std::istream& in, std::string_view source = "<embeddings>");
void write_embeddings(const std::vector<EmbeddingSequence>& sequences, std::ostream& out);

struct EstimateRecord {
  CountEstimate estimate;
  std::vector<SpeedScore> candidates;
  int window_size = 64;
  double tau = 0.5;
  CountingMode mode = CountingMode::gated;
  TailPolicy tail = TailPolicy::keep;
  bool pad_short = false;
};

std::vector<EstimateRecord> read_estimates(std::istream& in, std::string_view source = "<estimates>");
void write_estimates(const std::vector<EstimateRecord>& records, std::ostream& out);

struct ResultsConfig {
  double tau = 0.5;
  double alpha = 0.0;
  std::vector<int> strides{1, 2, 3, 4, 5};
  int window = 64;
  std::string mode = "segmented";  // segmented, gated or mixed
  std::string tail = "keep";
  bool round_predictions = false;
};

struct ResultsDocument {
  ResultsConfig config;
  MetricReport metrics;
  std::vector<int> speed_chosen;  // parallel to metrics.per_video
};

/// Joins a report with the estimates it was computed from. Throws when the
/// report is internally inconsistent or does not cover the estimates.
ResultsDocument make_results(const MetricReport& report, const std::vector<CountEstimate>& estimates,
                             const ResultsConfig& config);

/// Recomputes the metrics block from the per-video rows (1e-9).
void check_results(const ResultsDocument& doc);

std::string results_to_json(const ResultsDocument& doc);
ResultsDocument parse_results(std::string_view text, std::string_view source = "<results>");

/// Markdown table with columns Model, MAE α, MAE, OBOA, OBOE. Runs whose
/// counting configuration differs are called out in a footnote.
std::string render_table(const std::vector<ResultsDocument>& docs, const std::vector<std::string>& labels);

struct WrittenResults {
  ResultsDocument document;
  std::string json;
  std::string table;
};

WrittenResults write_results(const MetricReport& report, const std::vector<CountEstimate>& estimates,
                             const ResultsConfig& config, const std::string& label = "repcount");

/// Shortest text that parses back to the same double.
std::string format_double(double v);
/// α as shown in tables: one decimal when that is exact enough, else shortest.
std::string format_alpha(double alpha);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace repcount::io

#endif  // REPCOUNT_IO_HPP_
