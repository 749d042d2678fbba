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

#include "repcount/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "repcount/error.hpp"
#include "repcount/sum.hpp"

namespace repcount::io {
namespace {

using nlohmann::json;

std::string loc(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

// Field accessors that report the offending key.
const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

long long get_int(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
  return v.get<long long>();
}

double get_double(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string("field '") + key + "' must be finite");
  return d;
}

bool get_bool(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_boolean()) throw ValidationError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::vector<double> get_doubles(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array()) throw ValidationError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(std::string("field '") + key + "' element " + std::to_string(i) + " is not a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Calls fn(object, line_number) for every non-blank line of a JSONL stream
// and prefixes any error with its location.
template <typename Fn>
void for_each_record(std::istream& in, std::string_view source, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(loc(source, lineno) + ": record " + std::to_string(record) + ": malformed line (" +
                            e.what() + ")");
    }
    if (!obj.is_object()) {
      throw ValidationError(loc(source, lineno) + ": record " + std::to_string(record) + ": expected an object");
    }
    try {
      fn(obj, lineno);
    } catch (const ValidationError& e) {
      throw ValidationError(loc(source, lineno) + ": record " + std::to_string(record) + ": " + e.what());
    }
    ++record;
  }
  if (in.bad()) throw IoError(std::string(source) + ": read failed");
}

std::vector<std::string> split_csv(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ValidationError("manifest line " + std::to_string(lineno) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

}  // namespace

std::string_view to_string(DatasetMode mode) { return mode == DatasetMode::segmented ? "segmented" : "gapped"; }

DatasetMode parse_dataset_mode(std::string_view text) {
  if (text == "segmented") return DatasetMode::segmented;
  if (text == "gapped") return DatasetMode::gapped;
  throw ValidationError("unknown mode '" + std::string(text) + "' (allowed: segmented, gapped)");
}

CountingMode counting_mode_for(DatasetMode mode) {
  return mode == DatasetMode::segmented ? CountingMode::segmented : CountingMode::gated;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::string format_alpha(double alpha) {
  const double tenths = alpha * 10.0;
  if (std::abs(tenths - std::round(tenths)) < 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", alpha);
    return buf;
  }
  return format_double(alpha);
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::unordered_map<std::string, std::size_t> first_line;
  bool have_header = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    const std::string where = "manifest line " + std::to_string(lineno);
    if (!have_header) {
      if (line != kManifestHeader) {
        throw ValidationError(where + ", column 1: expected header '" + std::string(kManifestHeader) + "'");
      }
      have_header = true;
      continue;
    }
    auto cols = split_csv(line, lineno);
    if (cols.size() != 5) {
      throw ValidationError(where + ": expected 5 columns, found " + std::to_string(cols.size()));
    }
    auto at = [&](int col, const char* name) {
      return where + ", column " + std::to_string(col) + " (" + name + ")";
    };
    ManifestEntry e;
    e.video_id = cols[0];
    if (e.video_id.empty()) throw ValidationError(at(1, "video_id") + ": empty video_id");
    if (auto [it, fresh] = first_line.emplace(e.video_id, lineno); !fresh) {
      throw ValidationError(at(1, "video_id") + ": duplicate video_id '" + e.video_id + "' (first on line " +
                            std::to_string(it->second) + ")");
    }
    const std::string& g = cols[1];
    auto [end, ec] = std::from_chars(g.data(), g.data() + g.size(), e.gt_count);
    if (g.empty() || ec != std::errc() || end != g.data() + g.size() || !std::isfinite(e.gt_count)) {
      throw ValidationError(at(2, "gt_count") + ": not a number: '" + g + "'");
    }
    if (e.gt_count < 0.0) throw ValidationError(at(2, "gt_count") + ": negative gt_count " + g);
    try {
      e.mode = parse_dataset_mode(cols[2]);
    } catch (const ValidationError& err) {
      throw ValidationError(at(3, "mode") + ": " + err.what());
    }
    if (!cols[3].empty()) e.embedding_path = cols[3];
    if (!cols[4].empty()) e.prediction_path = cols[4];
    if (!e.embedding_path && !e.prediction_path) {
      throw ValidationError(where + ": both embedding_path and prediction_path are empty");
    }
    entries.push_back(std::move(e));
  }
  if (!have_header) throw ValidationError("manifest line 1: missing header");
  return entries;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const ManifestEntry& e : entries) {
    out += csv_field(e.video_id) + ',' + format_double(e.gt_count) + ',' + std::string(to_string(e.mode)) + ',' +
           csv_field(e.embedding_path.value_or("")) + ',' + csv_field(e.prediction_path.value_or("")) + '\n';
  }
  return out;
}

std::vector<PredictionRecord> read_predictions(std::istream& in, std::string_view source) {
  std::vector<PredictionRecord> out;
  std::map<std::pair<std::string, int>, std::size_t> seen;
  for_each_record(in, source, [&](const json& obj, std::size_t lineno) {
    PredictionRecord r;
    r.video_id = get_string(obj, "video_id");
    if (r.video_id.empty()) throw ValidationError("empty video_id");
    const long long speed = get_int(obj, "speed");
    const long long window = get_int(obj, "window_size");
    if (speed < 1 || speed > 1'000'000) throw ValidationError("speed must be >= 1");
    if (window < 4 || window % 2 != 0 || window > 1'000'000) {
      throw ValidationError("window_size must be even and >= 4");
    }
    r.speed = static_cast<int>(speed);
    r.window_size = static_cast<int>(window);
    const auto p = get_doubles(obj, "periodicity");
    const auto l = get_doubles(obj, "period_length");
    const auto s = get_doubles(obj, "period_score");
    if (p.size() != l.size() || p.size() != s.size()) {
      throw ValidationError("array length mismatch: periodicity " + std::to_string(p.size()) + ", period_length " +
                            std::to_string(l.size()) + ", period_score " + std::to_string(s.size()));
    }
    if (p.empty()) throw ValidationError("arrays must be non-empty");
    r.frames.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      r.frames[i] = {p[i], l[i], s[i]};
      try {
        validate_frame(r.frames[i], r.window_size);
      } catch (const ValidationError& e) {
        throw ValidationError("frame " + std::to_string(i) + ": " + e.what());
      }
    }
    if (auto [it, fresh] = seen.emplace(std::make_pair(r.video_id, r.speed), lineno); !fresh) {
      throw ValidationError("duplicate (video_id, speed) = ('" + r.video_id + "', " + std::to_string(r.speed) +
                            "), first on line " + std::to_string(it->second));
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_predictions(const std::vector<PredictionRecord>& records, std::ostream& out) {
  for (const PredictionRecord& r : records) {
    validate_track(r);
    json p = json::array();
    json l = json::array();
    json s = json::array();
    for (const FramePrediction& f : r.frames) {
      p.push_back(f.periodicity);
      l.push_back(f.period_len);
      s.push_back(f.period_score);
    }
    json obj = {{"video_id", r.video_id}, {"speed", r.speed},         {"window_size", r.window_size},
                {"periodicity", p},       {"period_length", l},       {"period_score", s}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing predictions");
}

std::vector<EmbeddingSequence> read_embeddings(std::istream& in, std::string_view source) {
  std::vector<EmbeddingSequence> out;
  std::set<std::string> seen;
  for_each_record(in, source, [&](const json& obj, std::size_t) {
    EmbeddingSequence e;
    e.video_id = get_string(obj, "video_id");
    if (e.video_id.empty()) throw ValidationError("empty video_id");
    if (!seen.insert(e.video_id).second) throw ValidationError("duplicate video_id '" + e.video_id + "'");
    const long long dims = get_int(obj, "dims");
    if (dims < 1) throw ValidationError("dims must be >= 1");
    const json& rows = field(obj, "rows");
    if (!rows.is_array() || rows.empty()) throw ValidationError("field 'rows' must be a non-empty array");
    e.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dims));
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const json& row = rows[t];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dims)) {
        throw ValidationError("row " + std::to_string(t) + " must hold " + std::to_string(dims) + " numbers");
      }
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (!row[c].is_number()) throw ValidationError("row " + std::to_string(t) + " holds a non-number");
        e.data(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = row[c].get<double>();
      }
    }
    validate_embeddings(e);
    out.push_back(std::move(e));
  });
  return out;
}

void write_embeddings(const std::vector<EmbeddingSequence>& sequences, std::ostream& out) {
  for (const EmbeddingSequence& e : sequences) {
    validate_embeddings(e);
    json rows = json::array();
    for (Eigen::Index t = 0; t < e.data.rows(); ++t) {
      json row = json::array();
      for (Eigen::Index c = 0; c < e.data.cols(); ++c) row.push_back(e.data(t, c));
      rows.push_back(std::move(row));
    }
    json obj = {{"video_id", e.video_id}, {"dims", e.data.cols()}, {"rows", std::move(rows)}};
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing embeddings");
}

std::vector<EstimateRecord> read_estimates(std::istream& in, std::string_view source) {
  std::vector<EstimateRecord> out;
  std::set<std::string> seen;
  for_each_record(in, source, [&](const json& obj, std::size_t) {
    EstimateRecord r;
    r.estimate.video_id = get_string(obj, "video_id");
    if (r.estimate.video_id.empty()) throw ValidationError("empty video_id");
    if (!seen.insert(r.estimate.video_id).second) {
      throw ValidationError("duplicate video_id '" + r.estimate.video_id + "'");
    }
    r.estimate.count = get_double(obj, "count");
    if (r.estimate.count < 0.0) throw ValidationError("count must be >= 0");
    r.estimate.speed_chosen = static_cast<int>(get_int(obj, "speed_chosen"));
    if (r.estimate.speed_chosen < 1) throw ValidationError("speed_chosen must be >= 1");
    r.estimate.period_score_mean = get_double(obj, "period_score_mean");
    r.window_size = static_cast<int>(get_int(obj, "window_size"));
    r.tau = get_double(obj, "tau");
    r.mode = parse_counting_mode(get_string(obj, "mode"));
    r.tail = parse_tail_policy(get_string(obj, "tail"));
    r.pad_short = get_bool(obj, "pad_short");
    if (obj.contains("per_frame_counts")) r.estimate.per_frame_counts = get_doubles(obj, "per_frame_counts");
    const json& cands = field(obj, "candidates");
    if (!cands.is_array()) throw ValidationError("field 'candidates' must be an array");
    for (const json& c : cands) {
      if (!c.is_object()) throw ValidationError("candidate must be an object");
      r.candidates.push_back({static_cast<int>(get_int(c, "stride")), get_double(c, "period_score_mean"),
                              get_double(c, "count")});
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_estimates(const std::vector<EstimateRecord>& records, std::ostream& out) {
  for (const EstimateRecord& r : records) {
    json cands = json::array();
    for (const SpeedScore& s : r.candidates) {
      cands.push_back({{"stride", s.stride}, {"period_score_mean", s.period_score_mean}, {"count", s.count}});
    }
    json obj = {{"video_id", r.estimate.video_id},
                {"count", r.estimate.count},
                {"speed_chosen", r.estimate.speed_chosen},
                {"period_score_mean", r.estimate.period_score_mean},
                {"window_size", r.window_size},
                {"tau", r.tau},
                {"mode", std::string(to_string(r.mode))},
                {"tail", std::string(to_string(r.tail))},
                {"pad_short", r.pad_short},
                {"candidates", std::move(cands)}};
    if (r.estimate.per_frame_counts) obj["per_frame_counts"] = *r.estimate.per_frame_counts;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing estimates");
}

void check_results(const ResultsDocument& doc) {
  const MetricReport& m = doc.metrics;
  if (m.per_video.empty()) throw ValidationError("results: empty per_video");
  if (m.n_videos != static_cast<int>(m.per_video.size())) {
    throw ValidationError("results: n_videos " + std::to_string(m.n_videos) + " != " +
                          std::to_string(m.per_video.size()) + " per_video rows");
  }
  if (doc.speed_chosen.size() != m.per_video.size()) {
    throw ValidationError("results: speed_chosen does not cover every row");
  }
  if (!(m.oboa >= 0.0 && m.oboa <= 1.0) || m.oboa + m.oboe != 1.0) {
    throw ValidationError("results: oboa/oboe are not complementary");
  }
  if (m.alpha_used != doc.config.alpha) throw ValidationError("results: metrics alpha differs from config alpha");
  std::size_t hits = 0;
  CompensatedSum sum;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < m.per_video.size(); ++i) {
    const PerVideoMetric& r = m.per_video[i];
    const std::string where = "results: per_video row " + std::to_string(i) + " ('" + r.video_id + "')";
    if (r.video_id.empty() || !ids.insert(r.video_id).second) {
      throw ValidationError(where + ": empty or duplicate video_id");
    }
    if (!(r.gt >= 0.0) || !(r.pred >= 0.0) || !std::isfinite(r.gt) || !std::isfinite(r.pred)) {
      throw ValidationError(where + ": counts must be finite and >= 0");
    }
    const double pred = doc.config.round_predictions ? std::round(r.pred) : r.pred;
    if (std::abs(std::abs(r.gt - pred) - r.abs_err) > 1e-9) throw ValidationError(where + ": abs_err mismatch");
    if (within_one(r.gt, pred) != r.within_one) throw ValidationError(where + ": within_one mismatch");
    hits += r.within_one;
    const double denom = doc.config.alpha + r.gt;
    if (denom == 0.0) {
      throw ValidationError(where + ": division by zero: set α>0 or filter zero-count videos");
    }
    sum.add(r.abs_err / denom);
  }
  const double n = static_cast<double>(m.per_video.size());
  if (std::abs(static_cast<double>(hits) / n - m.oboa) > 1e-9) {
    throw ValidationError("results: oboa does not match per_video rows");
  }
  if (std::abs(sum.value() / n - m.mae) > 1e-9 * std::max(1.0, m.mae)) {
    throw ValidationError("results: mae does not match per_video rows");
  }
}

ResultsDocument make_results(const MetricReport& report, const std::vector<CountEstimate>& estimates,
                             const ResultsConfig& config) {
  std::unordered_map<std::string, int> speed;
  for (const CountEstimate& e : estimates) speed[e.video_id] = e.speed_chosen;
  ResultsDocument doc{config, report, {}};
  for (const PerVideoMetric& r : report.per_video) {
    auto it = speed.find(r.video_id);
    if (it == speed.end()) throw ValidationError("results: no estimate for video '" + r.video_id + "'");
    doc.speed_chosen.push_back(it->second);
  }
  check_results(doc);
  return doc;
}

std::string results_to_json(const ResultsDocument& doc) {
  check_results(doc);
  const ResultsConfig& c = doc.config;
  json rows = json::array();
  for (std::size_t i = 0; i < doc.metrics.per_video.size(); ++i) {
    const PerVideoMetric& r = doc.metrics.per_video[i];
    rows.push_back({{"video_id", r.video_id},
                    {"gt", r.gt},
                    {"pred", r.pred},
                    {"abs_err", r.abs_err},
                    {"within_one", r.within_one},
                    {"speed_chosen", doc.speed_chosen[i]}});
  }
  json obj = {{"config",
               {{"tau", c.tau},
                {"alpha", c.alpha},
                {"strides", c.strides},
                {"window", c.window},
                {"mode", c.mode},
                {"tail", c.tail},
                {"round_predictions", c.round_predictions}}},
              {"metrics",
               {{"n_videos", doc.metrics.n_videos},
                {"oboa", doc.metrics.oboa},
                {"oboe", doc.metrics.oboe},
                {"mae", doc.metrics.mae},
                {"alpha", doc.metrics.alpha_used}}},
              {"per_video", std::move(rows)}};
  return obj.dump(2) + "\n";
}

ResultsDocument parse_results(std::string_view text, std::string_view source) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(source) + ": malformed results document (" + e.what() + ")");
  }
  ResultsDocument doc;
  std::string block = "config";
  std::size_t row = 0;
  try {
    if (!obj.is_object()) throw ValidationError("expected an object");
    const json& c = field(obj, "config");
    doc.config.tau = get_double(c, "tau");
    doc.config.alpha = get_double(c, "alpha");
    doc.config.window = static_cast<int>(get_int(c, "window"));
    doc.config.mode = get_string(c, "mode");
    doc.config.tail = get_string(c, "tail");
    doc.config.round_predictions = get_bool(c, "round_predictions");
    doc.config.strides.clear();
    for (double s : get_doubles(c, "strides")) doc.config.strides.push_back(static_cast<int>(s));
    block = "metrics";
    const json& m = field(obj, "metrics");
    doc.metrics.n_videos = static_cast<int>(get_int(m, "n_videos"));
    doc.metrics.oboa = get_double(m, "oboa");
    doc.metrics.oboe = get_double(m, "oboe");
    doc.metrics.mae = get_double(m, "mae");
    doc.metrics.alpha_used = get_double(m, "alpha");
    block = "per_video";
    const json& rows = field(obj, "per_video");
    if (!rows.is_array()) throw ValidationError("field 'per_video' must be an array");
    for (; row < rows.size(); ++row) {
      const json& r = rows[row];
      if (!r.is_object()) throw ValidationError("row must be an object");
      doc.metrics.per_video.push_back({get_string(r, "video_id"), get_double(r, "gt"), get_double(r, "pred"),
                                       get_double(r, "abs_err"), get_bool(r, "within_one")});
      doc.speed_chosen.push_back(static_cast<int>(get_int(r, "speed_chosen")));
    }
  } catch (const ValidationError& e) {
    std::string where = std::string(source) + ": " + block;
    if (block == "per_video") where += " row " + std::to_string(row);
    throw ValidationError(where + ": " + e.what());
  }
  check_results(doc);
  return doc;
}

std::string render_table(const std::vector<ResultsDocument>& docs, const std::vector<std::string>& labels) {
  if (docs.empty()) throw ValidationError("render_table: no results documents");
  if (labels.size() != docs.size()) {
    throw ValidationError("render_table: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(docs.size()) + " documents");
  }
  const std::vector<std::string> header{"Model", "MAE α", "MAE", "OBOA", "OBOE"};
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const MetricReport& m = docs[i].metrics;
    rows.push_back({labels[i], format_alpha(m.alpha_used), fixed4(m.mae), fixed4(m.oboa), fixed4(m.oboe)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = std::max<std::size_t>(3, display_width(header[c]));
    for (const auto& r : rows) width[c] = std::max(width[c], display_width(r[c]));
  }
  auto pad = [&](const std::string& s, std::size_t c) {
    const std::string fill(width[c] - display_width(s), ' ');
    return c == 0 ? s + fill : fill + s;
  };
  std::string out = "|";
  for (std::size_t c = 0; c < header.size(); ++c) out += " " + pad(header[c], c) + " |";
  out += "\n|";
  for (std::size_t c = 0; c < header.size(); ++c) {
    out += c == 0 ? " " + std::string(width[c], '-') + " |" : " " + std::string(width[c] - 1, '-') + ": |";
  }
  out += "\n";
  for (const auto& r : rows) {
    out += "|";
    for (std::size_t c = 0; c < r.size(); ++c) out += " " + pad(r[c], c) + " |";
    out += "\n";
  }

  std::set<int> windows;
  std::set<std::string> modes;
  for (const ResultsDocument& d : docs) {
    windows.insert(d.config.window);
    modes.insert(d.config.mode);
  }
  if (windows.size() > 1 || modes.size() > 1 || modes.count("mixed")) {
    std::string w;
    for (int v : windows) w += (w.empty() ? "" : ", ") + std::to_string(v);
    std::string md;
    for (const auto& v : modes) md += (md.empty() ? "" : ", ") + v;
    out += "\nNote: rows were produced with different counting configurations (window: " + w + "; mode: " + md +
           "); they are not directly comparable.\n";
  }
  return out;
}

WrittenResults write_results(const MetricReport& report, const std::vector<CountEstimate>& estimates,
                             const ResultsConfig& config, const std::string& label) {
  WrittenResults w;
  w.document = make_results(report, estimates, config);
  w.json = results_to_json(w.document);
  w.table = render_table({w.document}, {label});
  return w;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace repcount::io
