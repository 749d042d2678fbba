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

#include "repcount/estimator.hpp"

#include <cstdio>
#include <limits>
#include <random>

namespace repcount {
namespace {

constexpr double kPi = 3.14159265358979323846;

// std:: distributions are implementation-defined; these are not.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

class Gaussian {
 public:
  double operator()(std::mt19937_64& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * kPi * u2);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

void validate_embeddings(const EmbeddingSequence& e) {
  if (e.data.rows() < 1 || e.data.cols() < 1) {
    throw ValidationError("embeddings '" + e.video_id + "' must have T >= 1 and D >= 1");
  }
  if (!e.data.allFinite()) throw ValidationError("embeddings '" + e.video_id + "' contain non-finite values");
}

Eigen::MatrixXd tsm(const EmbeddingSequence& e) {
  validate_embeddings(e);
  return tsm(e.data);
}

PredictionTrack predict_track(const EmbeddingSequence& e, int stride, int window_size) {
  validate_embeddings(e);
  return predict_track(e.data, stride, window_size, e.video_id);
}

void validate_synth_spec(const SynthSpec& spec) {
  if (spec.total_frames < 1) throw ValidationError("total_frames must be >= 1");
  if (spec.period < 2) throw ValidationError("period must be >= 2, got " + std::to_string(spec.period));
  if (spec.dims < 2) throw ValidationError("dims must be >= 2, got " + std::to_string(spec.dims));
  if (!std::isfinite(spec.noise_sigma) || spec.noise_sigma < 0.0) {
    throw ValidationError("noise_sigma must be finite and >= 0");
  }
  auto gaps = spec.gaps;
  std::sort(gaps.begin(), gaps.end());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const auto [a, b] = gaps[i];
    if (a < 0 || b > spec.total_frames || a >= b) {
      throw ValidationError("gap [" + std::to_string(a) + ", " + std::to_string(b) +
                            ") must be non-empty and within [0, " + std::to_string(spec.total_frames) + ")");
    }
    if (i > 0 && a < gaps[i - 1].second) {
      throw ValidationError("gaps [" + std::to_string(gaps[i - 1].first) + ", " +
                            std::to_string(gaps[i - 1].second) + ") and [" + std::to_string(a) + ", " +
                            std::to_string(b) + ") overlap");
    }
  }
}

std::pair<EmbeddingSequence, SynthTruth> synth_periodic(const SynthSpec& spec, std::string video_id) {
  validate_synth_spec(spec);
  const int t_total = spec.total_frames;
  const int d = spec.dims;
  std::mt19937_64 rng(spec.seed);
  const double phi0 = uniform(rng, 0.0, 2.0 * kPi);
  const double drift_period = uniform(rng, 512.0, 2048.0);

  SynthTruth truth;
  truth.periodic_mask.assign(t_total, true);
  for (const auto& [a, b] : spec.gaps) {
    std::fill(truth.periodic_mask.begin() + a, truth.periodic_mask.begin() + b, false);
  }

  const int harmonic_cols = std::min(6, d);
  double amp2 = 0.0;
  for (int c = 0; c < harmonic_cols; c += 2) {
    const double a = 1.0 / (c / 2 + 1);
    amp2 += a * a;
  }
  const double gap_radius = std::sqrt(amp2);
  const int gx = d >= 8 ? 6 : d - 2;

  EmbeddingSequence e{std::move(video_id), Eigen::MatrixXd::Zero(t_total, d)};
  for (int t = 0; t < t_total; ++t) {
    if (truth.periodic_mask[t]) {
      for (int c = 0; c < harmonic_cols; ++c) {
        const int h = c / 2 + 1;
        const double arg = 2.0 * kPi * h * static_cast<double>(t) / spec.period;
        e.data(t, c) = (c % 2 == 0 ? std::cos(arg) : std::sin(arg)) / h;
      }
    } else {
      const double phi = phi0 + 2.0 * kPi * static_cast<double>(t) / drift_period;
      e.data(t, gx) = gap_radius * std::cos(phi);
      e.data(t, gx + 1) = gap_radius * std::sin(phi);
    }
  }
  if (spec.noise_sigma > 0.0) {
    Gaussian gauss;
    for (int t = 0; t < t_total; ++t) {
      for (int c = 0; c < d; ++c) e.data(t, c) += spec.noise_sigma * gauss(rng);
    }
  }
  const auto periodic = std::count(truth.periodic_mask.begin(), truth.periodic_mask.end(), true);
  truth.gt_count = static_cast<double>(periodic) / spec.period;
  return {std::move(e), std::move(truth)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate_dataset_spec(const SynthDatasetSpec& s) {
  if (s.videos < 1) throw ValidationError("videos must be >= 1");
  if (s.min_period < 2 || s.max_period < s.min_period) {
    throw ValidationError("period range must satisfy 2 <= min_period <= max_period");
  }
  if (s.min_frames < 1 || s.max_frames < s.min_frames) {
    throw ValidationError("frame range must satisfy 1 <= min_frames <= max_frames");
  }
  if (s.dims < 2) throw ValidationError("dims must be >= 2");
  if (!std::isfinite(s.max_noise) || s.max_noise < 0.0) throw ValidationError("noise must be finite and >= 0");
  if (!(s.min_gap_fraction >= 0.0 && s.min_gap_fraction <= s.max_gap_fraction && s.max_gap_fraction < 1.0)) {
    throw ValidationError("gap fractions must satisfy 0 <= min <= max < 1");
  }
}

std::vector<SynthVideo> synth_dataset(const SynthDatasetSpec& s) {
  validate_dataset_spec(s);
  std::vector<SynthVideo> out;
  out.reserve(s.videos);
  for (int i = 0; i < s.videos; ++i) {
    const std::uint64_t vseed = derive_seed(s.seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(vseed);
    SynthSpec spec;
    spec.period = static_cast<int>(uniform_int(rng, s.min_period, s.max_period));
    spec.total_frames = static_cast<int>(uniform_int(rng, s.min_frames, s.max_frames));
    spec.dims = s.dims;
    spec.noise_sigma = uniform(rng, 0.0, s.max_noise);
    if (s.gapped) {
      const double frac = uniform(rng, s.min_gap_fraction, s.max_gap_fraction);
      const int g = static_cast<int>(std::lround(frac * spec.total_frames));
      if (g > 0) {
        const int a = static_cast<int>(uniform_int(rng, 0, spec.total_frames - g));
        spec.gaps.emplace_back(a, a + g);
      }
    }
    spec.seed = rng();
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%05d", i);
    out.push_back({id, std::move(spec)});
  }
  return out;
}

}  // namespace repcount
