// Copyright 2026 The selstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace selstream {

inline constexpr std::size_t kMetaFeatureCount = 6;
using MetaFeatures = std::array<double, kMetaFeatureCount>;

/// mean, std, skew, excess kurtosis, lag-1 autocorrelation, turning-point
/// rate. Population moments; degenerate cases map to 0. Throws
/// InsufficientDataError on an empty series.
MetaFeatures meta_features(std::span<const double> series);

/// Gaps between successive error positions; {0} when there are < 2 errors.
std::vector<double> error_distances(std::span<const double> errors);

/// Number of behaviour sources for k features: labels, predictions, k
/// features, errors, error gaps.
constexpr std::size_t behaviour_source_count(std::size_t k) { return k + 4; }
constexpr std::size_t fingerprint_dimension(std::size_t k) { return behaviour_source_count(k) * kMetaFeatureCount; }

struct BehaviourSources {
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
};

/// Sources of a window given row-major features, true labels and
/// predictions, in fingerprint order.
BehaviourSources extract_behaviour_sources(const std::vector<std::vector<double>>& x, std::span<const int> y,
                                           std::span<const int> predictions);

/// Concatenated meta-features of every source.
std::vector<double> fingerprint_of(const BehaviourSources& sources);

// ---- windows ---------------------------------------------------------------

struct TimeRange {
    std::size_t begin = 0;  // absolute timestep, inclusive
    std::size_t end = 0;    // exclusive
    std::size_t size() const { return end - begin; }
};

/// Shared part of the head/buffer/stable windows: the last window + buffer
/// observations. The head window is the newest `window` observations; an
/// observation joins the stable window `buffer` steps after arrival, and the
/// stable window holds at most `window` observations. flush() empties buffer
/// and stable window; the head window is unaffected.
class BehaviourWindows {
  public:
    BehaviourWindows(std::size_t feature_count, std::size_t window, std::size_t buffer);

    void push(std::span<const double> x, int y);
    void flush() { flushed_at_ = now_; }

    std::size_t now() const { return now_; }
    /// Observations since the last flush.
    std::size_t since_flush() const { return now_ - flushed_at_; }
    std::size_t window() const { return window_; }
    std::size_t buffer() const { return buffer_; }
    std::size_t feature_count() const { return k_; }

    TimeRange head() const;
    /// The newest min(n, head size) observations.
    TimeRange recent(std::size_t n) const;
    TimeRange stable() const;
    std::size_t buffer_size() const;

    int label_at(std::size_t t) const { return y_[t % cap_]; }
    void copy_labels(TimeRange r, std::vector<double>& out) const;
    void copy_feature(std::size_t f, TimeRange r, std::vector<double>& out) const;

  private:
    std::size_t k_, window_, buffer_, cap_;
    std::size_t now_ = 0;
    std::size_t flushed_at_ = 0;
    std::vector<int> y_;
    std::vector<double> x_;  // cap_ rows of k_ values
};

/// Per-state record of predictions made at arrival time.
class PredictionRing {
  public:
    explicit PredictionRing(std::size_t capacity = 1) : pred_(capacity, 0) {}
    /// Records the prediction for timestep t (t must be the next timestep).
    void push(std::size_t t, int prediction);
    void clear() { count_ = 0; }
    /// Timesteps with a recorded prediction, newest last.
    std::size_t count() const { return count_; }
    std::size_t first() const { return next_ - count_; }
    int at(std::size_t t) const { return pred_[t % pred_.size()]; }

  private:
    std::vector<int> pred_;
    std::size_t next_ = 0;
    std::size_t count_ = 0;
};

/// Meta-features of the sources shared by every state over one range.
struct SharedMeta {
    TimeRange range;
    MetaFeatures labels{};
    std::vector<double> features;  // k * 6
};

SharedMeta shared_meta(const BehaviourWindows& bw, TimeRange r);

/// Full fingerprint over `shared.range` using `preds` for the prediction,
/// error and error-gap sources. The ring must cover the range.
void assemble_fingerprint(const SharedMeta& shared, const BehaviourWindows& bw, const PredictionRing& preds,
                          std::vector<double>& out);

// ---- representations -------------------------------------------------------

/// Per-dimension running Gaussian of incorporated fingerprints (Welford).
/// stddev() is the population standard deviation.
class ConceptRepresentation {
  public:
    ConceptRepresentation() = default;
    explicit ConceptRepresentation(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

    void add(std::span<const double> fp);
    std::size_t count() const { return n_; }
    std::size_t dimension() const { return mean_.size(); }
    const std::vector<double>& mean() const { return mean_; }
    std::vector<double> stddev() const;
    double variance(std::size_t k) const { return n_ ? m2_[k] / static_cast<double>(n_) : 0.0; }

  private:
    std::size_t n_ = 0;
    std::vector<double> mean_, m2_;
};

/// Scalar running mean/std (Welford), population std.
class RunningStats {
  public:
    void add(double v);
    void clear() { *this = RunningStats{}; }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double stddev() const;

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
};

enum class Normalization { none, minmax, zscore };

/// Global per-dimension scaling fitted to every incorporated fingerprint.
/// minmax maps to [-0.5, 0.5] by the running range (zero range -> 0); zscore
/// centres and scales by the running std (zero std -> 0).
class Normalizer {
  public:
    Normalizer(std::size_t dim = 0, Normalization mode = Normalization::minmax);
    void update(std::span<const double> fp);
    void apply(std::span<const double> in, std::span<double> out) const;
    /// Scale factor applied to standard deviations.
    double scale(std::size_t k) const;
    Normalization mode() const { return mode_; }
    std::size_t count() const { return n_; }

  private:
    Normalization mode_;
    std::size_t n_ = 0;
    std::vector<double> lo_, hi_, mean_, m2_;
};

/// W_k = sum_i n_i (mu_ik - mu_k)^2 / (sum_i n_i sigma_ik^2 + 1e-6), mu_k the
/// count-weighted grand mean. A single group gives all ones. Groups with no
/// fingerprints are ignored. `norm` (optional) rescales means and stds first.
std::vector<double> fisher_weights(std::span<const ConceptRepresentation* const> groups,
                                   const Normalizer* norm = nullptr);

/// Cosine of the elementwise-weighted vectors; 0 if either is all zero.
/// Throws InputError on a dimension mismatch.
double weighted_cosine_similarity(std::span<const double> a, std::span<const double> b, std::span<const double> w);

}  // namespace selstream
