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

#ifndef REPCOUNT_ESTIMATOR_HPP_
#define REPCOUNT_ESTIMATOR_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "repcount/counting.hpp"
#include "repcount/error.hpp"
#include "repcount/multispeed.hpp"

namespace repcount {

/// T x D frame embeddings, one row per frame.
struct EmbeddingSequence {
  std::string video_id;
  Eigen::MatrixXd data;
};

void validate_embeddings(const EmbeddingSequence& e);

/// Self-similarity S(i, j) = -||e_i - e_j||^2. Exactly symmetric, zero diagonal.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tsm(
    const Eigen::MatrixBase<Derived>& frames) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index t = frames.rows();
  if (t < 2) throw ValidationError("tsm needs at least 2 frames, got " + std::to_string(t));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> s(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    s(i, i) = Scalar(0);
    for (Eigen::Index j = i + 1; j < t; ++j) {
      const Scalar d = -(frames.row(i) - frames.row(j)).squaredNorm();
      s(i, j) = d;
      s(j, i) = d;
    }
  }
  return s;
}

Eigen::MatrixXd tsm(const EmbeddingSequence& e);

/// Per-row period estimator for lags 2..W/2.
///
/// The row is mean-removed and zero-padded to 16 * max(W, n) points so each
/// candidate lag L has its own nearest bin round(N / L). The lag and the
/// period score come from a Hann-tapered spectrum: the lag maximizes the
/// tapered magnitude over candidate bins (ties to the shortest lag) and the
/// score is that magnitude over the largest non-DC magnitude. Periodicity is
/// the untapered peak power over total non-DC power. A row whose lag-L
/// overlap does not correlate positively with itself gets score 0.
template <typename Scalar>
class PeriodEstimator {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit PeriodEstimator(int window_size) : w_(window_size) {
    if (w_ < 4 || w_ % 2 != 0) {
      throw ValidationError("window_size must be even and >= 4, got " + std::to_string(w_));
    }
    fft_.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
  }

  int window_size() const { return w_; }

  template <typename Derived>
  FramePrediction operator()(const Eigen::MatrixBase<Derived>& row) {
    const Eigen::Index n = row.size();
    if (n < 1) throw ValidationError("empty similarity row");
    prepare(n);

    const Vector r = row.derived().template cast<Scalar>();
    const Vector x = r.array() - r.mean();
    const Scalar scale = r.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(256) * Eigen::NumTraits<Scalar>::epsilon() * (Scalar(1) + scale);
    if (!(x.cwiseAbs().maxCoeff() > tol)) {
      return {0.0, 2.0, 2.0 / static_cast<double>(w_ - 2)};
    }

    const Scalar wmean = hann_.dot(r) / hann_.sum();
    std::fill(buf_.begin(), buf_.end(), Scalar(0));
    for (Eigen::Index j = 0; j < n; ++j) buf_[j] = (r(j) - wmean) * hann_(j);
    fft_.fwd(spec_, buf_);

    Scalar peak_all(0);
    for (std::size_t k = 1; k < spec_.size(); ++k) peak_all = std::max(peak_all, std::abs(spec_[k]));

    int best = 2;
    Scalar best_mag(-1);
    for (int lag = 2; lag <= w_ / 2; ++lag) {
      const Scalar m = std::abs(spec_[bins_[lag]]);
      if (m > best_mag) {
        best_mag = m;
        best = lag;
      }
    }

    const Scalar xx = x.squaredNorm();
    const std::complex<Scalar> peak = dft_bin(x, bins_[best]);
    const Scalar nyq = dft_nyquist(x);
    const Scalar total = (Scalar(n) * xx + nyq * nyq) / Scalar(2);
    const Scalar periodicity = std::min(Scalar(1), std::norm(peak) / total);

    Scalar score = peak_all > Scalar(0) ? std::min(Scalar(1), best_mag / peak_all) : Scalar(0);
    if (!repeats_at(x, best, xx)) score = Scalar(0);

    return {static_cast<double>(periodicity), static_cast<double>(best), static_cast<double>(score)};
  }

 private:
  void prepare(Eigen::Index n) {
    const int nfft = 16 * std::max<int>(w_, static_cast<int>(n));
    if (nfft != nfft_) {
      nfft_ = nfft;
      buf_.assign(nfft_, Scalar(0));
      bins_.assign(w_ / 2 + 1, 0);
      for (int lag = 2; lag <= w_ / 2; ++lag) {
        bins_[lag] = static_cast<int>(std::lround(static_cast<double>(nfft_) / lag));
      }
    }
    if (hann_.size() != n) {
      hann_.resize(n);
      const double pi = 3.14159265358979323846;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = std::sin(pi * static_cast<double>(j + 1) / static_cast<double>(n + 1));
        hann_(j) = static_cast<Scalar>(v * v);
      }
    }
  }

  std::complex<Scalar> dft_bin(const Vector& x, int k) const {
    const double pi = 3.14159265358979323846;
    double re = 0.0;
    double im = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const long long phase = (static_cast<long long>(k) * j) % nfft_;
      const double a = 2.0 * pi * static_cast<double>(phase) / static_cast<double>(nfft_);
      re += static_cast<double>(x(j)) * std::cos(a);
      im -= static_cast<double>(x(j)) * std::sin(a);
    }
    return {static_cast<Scalar>(re), static_cast<Scalar>(im)};
  }

  static Scalar dft_nyquist(const Vector& x) {
    Scalar s(0);
    for (Eigen::Index j = 0; j < x.size(); ++j) s += (j % 2 == 0) ? x(j) : -x(j);
    return s;
  }

  static bool repeats_at(const Vector& x, int lag, Scalar xx) {
    const Eigen::Index m = x.size() - lag;
    if (m < 2) return false;
    const Vector a = x.head(m).array() - x.head(m).mean();
    const Vector b = x.tail(m).array() - x.tail(m).mean();
    const Scalar d = std::sqrt(a.squaredNorm() * b.squaredNorm());
    if (!(d > Scalar(1e-12) * xx)) return false;
    return a.dot(b) / d > Scalar(0);
  }

  int w_;
  int nfft_ = 0;
  std::vector<int> bins_;
  Vector hann_;
  std::vector<Scalar> buf_;
  std::vector<std::complex<Scalar>> spec_;
  Eigen::FFT<Scalar> fft_;
};

/// Runs PeriodEstimator on every row of a square similarity slice.
template <typename Derived>
std::vector<FramePrediction> estimate_frame_periods(const Eigen::MatrixBase<Derived>& window_tsm,
                                                    int window_size) {
  if (window_tsm.rows() != window_tsm.cols()) {
    throw ValidationError("similarity slice must be square");
  }
  PeriodEstimator<typename Derived::Scalar> est(window_size);
  std::vector<FramePrediction> out;
  out.reserve(window_tsm.rows());
  for (Eigen::Index i = 0; i < window_tsm.rows(); ++i) out.push_back(est(window_tsm.row(i).transpose()));
  return out;
}

/// Subsamples the frames by stride and estimates every variant frame against
/// the min(W, T) variant frames centred on it (clamped at the ends).
template <typename Derived>
PredictionTrack predict_track(const Eigen::MatrixBase<Derived>& frames, int stride, int window_size,
                              std::string video_id = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (!frames.allFinite()) throw ValidationError("embeddings contain non-finite values");
  const Matrix v = subsample(frames, stride);
  PeriodEstimator<Scalar> est(window_size);
  const Eigen::Index t = v.rows();
  const Eigen::Index n = std::min<Eigen::Index>(window_size, t);
  PredictionTrack track{std::move(video_id), stride, window_size, {}};
  track.frames.reserve(t);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row(n);
  for (Eigen::Index i = 0; i < t; ++i) {
    const Eigen::Index a = std::clamp<Eigen::Index>(i - window_size / 2, 0, t - n);
    for (Eigen::Index j = 0; j < n; ++j) row(j) = -(v.row(i) - v.row(a + j)).squaredNorm();
    track.frames.push_back(est(row));
  }
  return track;
}

PredictionTrack predict_track(const EmbeddingSequence& e, int stride, int window_size);

struct SynthSpec {
  int total_frames = 64;
  int period = 8;
  int dims = 8;
  double noise_sigma = 0.0;
  std::vector<std::pair<int, int>> gaps;  // [start, end)
  std::uint64_t seed = 0;
};

struct SynthTruth {
  double gt_count = 0.0;
  std::vector<bool> periodic_mask;
};

void validate_synth_spec(const SynthSpec& spec);

/// Periodic frames carry harmonics 1..3 of 1/period with amplitudes
/// 1, 1/2, 1/3 in (cos, sin) pairs; gap frames a slow circular drift of the
/// same norm. Gaussian noise of scale noise_sigma is added everywhere.
std::pair<EmbeddingSequence, SynthTruth> synth_periodic(const SynthSpec& spec,
                                                        std::string video_id = "synth");

struct SynthDatasetSpec {
  int videos = 10;
  std::uint64_t seed = 0;
  bool gapped = false;
  int min_period = 2;
  int max_period = 160;
  int min_frames = 128;
  int max_frames = 1024;
  int dims = 8;
  double max_noise = 0.05;
  double min_gap_fraction = 0.3;
  double max_gap_fraction = 0.5;
};

struct SynthVideo {
  std::string video_id;
  SynthSpec spec;
};

void validate_dataset_spec(const SynthDatasetSpec& spec);

/// Per-video specs; video i depends only on (seed, i).
std::vector<SynthVideo> synth_dataset(const SynthDatasetSpec& spec);

/// splitmix64 finalizer of (seed, index), used for per-video seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace repcount

#endif  // REPCOUNT_ESTIMATOR_HPP_
