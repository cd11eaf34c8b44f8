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

#include "selstream/fingerprint.hpp"

#include <algorithm>
#include <cmath>

#include "selstream/errors.hpp"
#include "selstream/kernels.hpp"

namespace selstream {

MetaFeatures meta_features(std::span<const double> x) {
    if (x.empty()) throw InsufficientDataError("meta-features of an empty series");
    const double n = static_cast<double>(x.size());
    const double mean = kernels::sum(x) / n;
    const auto cs = kernels::central_sums(x, mean);
    const double var = cs.s2 / n;

    MetaFeatures out{};
    out[0] = mean;
    // Rounding leaves a tiny positive variance on constant series.
    if (!(var > 1e-20 * std::max(1.0, mean * mean))) return out;
    out[1] = std::sqrt(var);
    out[2] = (cs.s3 / n) / (var * out[1]);
    out[3] = (cs.s4 / n) / (var * var) - 3.0;
    if (x.size() > 1) out[4] = kernels::lag1_cross(x, mean) / cs.s2;
    if (x.size() > 2) out[5] = static_cast<double>(kernels::turning_points(x)) / (n - 2.0);
    return out;
}

std::vector<double> error_distances(std::span<const double> errors) {
    std::vector<double> gaps;
    std::size_t last = 0;
    bool seen = false;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i] == 0.0) continue;
        if (seen) gaps.push_back(static_cast<double>(i - last));
        last = i;
        seen = true;
    }
    if (gaps.empty()) gaps.push_back(0.0);
    return gaps;
}

BehaviourSources extract_behaviour_sources(const std::vector<std::vector<double>>& x, std::span<const int> y,
                                           std::span<const int> predictions) {
    if (x.empty()) throw InsufficientDataError("behaviour sources of an empty window");
    if (y.size() != x.size() || predictions.size() != x.size())
        throw InputError("window features, labels and predictions differ in length");
    const std::size_t k = x.front().size();
    BehaviourSources s;
    s.names.push_back("labels");
    s.series.emplace_back(y.begin(), y.end());
    s.names.push_back("predictions");
    s.series.emplace_back(predictions.begin(), predictions.end());
    for (std::size_t f = 0; f < k; ++f) {
        s.names.push_back("f" + std::to_string(f));
        std::vector<double> col;
        col.reserve(x.size());
        for (const auto& row : x) {
            if (row.size() != k) throw InputError("ragged window features");
            col.push_back(row[f]);
        }
        s.series.push_back(std::move(col));
    }
    std::vector<double> err(x.size());
    for (std::size_t i = 0; i < err.size(); ++i) err[i] = y[i] != predictions[i] ? 1.0 : 0.0;
    auto gaps = error_distances(err);
    s.names.push_back("errors");
    s.series.push_back(std::move(err));
    s.names.push_back("error_distances");
    s.series.push_back(std::move(gaps));
    return s;
}

std::vector<double> fingerprint_of(const BehaviourSources& sources) {
    std::vector<double> fp;
    fp.reserve(sources.series.size() * kMetaFeatureCount);
    for (const auto& s : sources.series) {
        const auto m = meta_features(s);
        fp.insert(fp.end(), m.begin(), m.end());
    }
    return fp;
}

// ---- windows ---------------------------------------------------------------

BehaviourWindows::BehaviourWindows(std::size_t feature_count, std::size_t window, std::size_t buffer)
    : k_(feature_count), window_(window), buffer_(buffer), cap_(window + buffer) {
    if (window == 0) throw InputError("window size must be > 0");
    y_.assign(cap_, 0);
    x_.assign(cap_ * k_, 0.0);
}

void BehaviourWindows::push(std::span<const double> x, int y) {
    if (x.size() != k_) throw InputError("window arity mismatch");
    const std::size_t slot = now_ % cap_;
    y_[slot] = y;
    std::copy(x.begin(), x.end(), x_.begin() + static_cast<std::ptrdiff_t>(slot * k_));
    ++now_;
}

TimeRange BehaviourWindows::head() const { return recent(window_); }

TimeRange BehaviourWindows::recent(std::size_t n) const {
    const std::size_t len = std::min({n, window_, now_});
    return {now_ - len, now_};
}

TimeRange BehaviourWindows::stable() const {
    if (now_ < flushed_at_ + buffer_) return {now_, now_};
    const std::size_t end = now_ - buffer_;
    std::size_t begin = flushed_at_;
    if (end - begin > window_) begin = end - window_;
    return {begin, end};
}

std::size_t BehaviourWindows::buffer_size() const { return std::min(buffer_, now_ - flushed_at_); }

void BehaviourWindows::copy_labels(TimeRange r, std::vector<double>& out) const {
    out.resize(r.size());
    for (std::size_t t = r.begin; t < r.end; ++t) out[t - r.begin] = y_[t % cap_];
}

void BehaviourWindows::copy_feature(std::size_t f, TimeRange r, std::vector<double>& out) const {
    out.resize(r.size());
    for (std::size_t t = r.begin; t < r.end; ++t) out[t - r.begin] = x_[(t % cap_) * k_ + f];
}

void PredictionRing::push(std::size_t t, int prediction) {
    if (count_ > 0 && t != next_) throw InternalError("prediction ring out of sequence");
    if (count_ == 0) next_ = t;
    pred_[t % pred_.size()] = prediction;
    next_ = t + 1;
    count_ = std::min(count_ + 1, pred_.size());
}

SharedMeta shared_meta(const BehaviourWindows& bw, TimeRange r) {
    SharedMeta m;
    m.range = r;
    std::vector<double> buf;
    bw.copy_labels(r, buf);
    m.labels = meta_features(buf);
    m.features.reserve(bw.feature_count() * kMetaFeatureCount);
    for (std::size_t f = 0; f < bw.feature_count(); ++f) {
        bw.copy_feature(f, r, buf);
        const auto mf = meta_features(buf);
        m.features.insert(m.features.end(), mf.begin(), mf.end());
    }
    return m;
}

void assemble_fingerprint(const SharedMeta& shared, const BehaviourWindows& bw, const PredictionRing& preds,
                          std::vector<double>& out) {
    const TimeRange r = shared.range;
    if (preds.count() == 0 || r.begin < preds.first()) throw InternalError("prediction ring does not cover window");
    std::vector<double> pred(r.size()), err(r.size());
    for (std::size_t t = r.begin; t < r.end; ++t) {
        const int p = preds.at(t);
        pred[t - r.begin] = p;
        err[t - r.begin] = p != bw.label_at(t) ? 1.0 : 0.0;
    }
    out.clear();
    out.reserve(fingerprint_dimension(bw.feature_count()));
    auto append = [&out](const MetaFeatures& m) { out.insert(out.end(), m.begin(), m.end()); };
    append(shared.labels);
    append(meta_features(pred));
    out.insert(out.end(), shared.features.begin(), shared.features.end());
    append(meta_features(err));
    append(meta_features(error_distances(err)));
}

// ---- representations -------------------------------------------------------

void ConceptRepresentation::add(std::span<const double> fp) {
    if (mean_.empty() && n_ == 0) {
        mean_.assign(fp.size(), 0.0);
        m2_.assign(fp.size(), 0.0);
    }
    if (fp.size() != mean_.size()) throw InputError("fingerprint dimension mismatch");
    ++n_;
    const double n = static_cast<double>(n_);
    for (std::size_t k = 0; k < fp.size(); ++k) {
        const double d = fp[k] - mean_[k];
        mean_[k] += d / n;
        m2_[k] += d * (fp[k] - mean_[k]);
    }
}

std::vector<double> ConceptRepresentation::stddev() const {
    std::vector<double> s(mean_.size(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sqrt(std::max(0.0, variance(k)));
    return s;
}

void RunningStats::add(double v) {
    ++n_;
    const double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
}

double RunningStats::stddev() const { return n_ ? std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_))) : 0.0; }

Normalizer::Normalizer(std::size_t dim, Normalization mode)
    : mode_(mode), lo_(dim, 0.0), hi_(dim, 0.0), mean_(dim, 0.0), m2_(dim, 0.0) {}

void Normalizer::update(std::span<const double> fp) {
    if (lo_.empty() && n_ == 0) *this = Normalizer(fp.size(), mode_);
    if (fp.size() != lo_.size()) throw InputError("fingerprint dimension mismatch");
    ++n_;
    const double n = static_cast<double>(n_);
    for (std::size_t k = 0; k < fp.size(); ++k) {
        if (n_ == 1) {
            lo_[k] = hi_[k] = fp[k];
        } else {
            lo_[k] = std::min(lo_[k], fp[k]);
            hi_[k] = std::max(hi_[k], fp[k]);
        }
        const double d = fp[k] - mean_[k];
        mean_[k] += d / n;
        m2_[k] += d * (fp[k] - mean_[k]);
    }
}

double Normalizer::scale(std::size_t k) const {
    if (n_ == 0 || mode_ == Normalization::none) return 1.0;
    if (mode_ == Normalization::minmax) {
        const double range = hi_[k] - lo_[k];
        return range > 0.0 ? 1.0 / range : 0.0;
    }
    const double sd = std::sqrt(m2_[k] / static_cast<double>(n_));
    return sd > 0.0 ? 1.0 / sd : 0.0;
}

void Normalizer::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != out.size()) throw InputError("normalizer output size mismatch");
    if (n_ == 0 || mode_ == Normalization::none) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    if (in.size() != lo_.size()) throw InputError("fingerprint dimension mismatch");
    const bool minmax = mode_ == Normalization::minmax;
    // Centring the min-max range keeps cosine similarity sensitive to
    // dimensions whose values sit near one end of their range.
    const double shift = minmax ? 0.5 : 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
        const double range_ok = minmax ? scale(k) > 0.0 : true;
        out[k] = range_ok ? (in[k] - (minmax ? lo_[k] : mean_[k])) * scale(k) - shift : 0.0;
    }
}

std::vector<double> fisher_weights(std::span<const ConceptRepresentation* const> groups, const Normalizer* norm) {
    std::vector<const ConceptRepresentation*> live;
    for (const auto* g : groups)
        if (g && g->count() > 0) live.push_back(g);
    if (live.empty()) throw InsufficientDataError("Fisher weights need at least one representation");
    const std::size_t dim = live.front()->dimension();
    std::vector<double> w(dim, 1.0);
    if (live.size() < 2) return w;

    std::vector<std::vector<double>> means;
    for (const auto* g : live) {
        if (g->dimension() != dim) throw InputError("representation dimension mismatch");
        std::vector<double> m(g->mean());
        if (norm) norm->apply(g->mean(), m);
        means.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < dim; ++k) {
        const double s = norm ? norm->scale(k) : 1.0;
        double total_n = 0.0, grand = 0.0;
        for (std::size_t i = 0; i < live.size(); ++i) {
            total_n += static_cast<double>(live[i]->count());
            grand += static_cast<double>(live[i]->count()) * means[i][k];
        }
        grand /= total_n;
        double between = 0.0, within = 0.0;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const double n = static_cast<double>(live[i]->count());
            const double d = means[i][k] - grand;
            between += n * d * d;
            within += n * live[i]->variance(k) * s * s;
        }
        w[k] = between / (within + 1e-6);
    }
    return w;
}

double weighted_cosine_similarity(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    if (a.size() != b.size() || a.size() != w.size()) throw InputError("similarity dimension mismatch");
    const auto d = kernels::weighted_dot3(a, b, w);
    if (!(d.aa > 0.0) || !(d.bb > 0.0)) return 0.0;
    return std::clamp(d.ab / (std::sqrt(d.aa) * std::sqrt(d.bb)), -1.0, 1.0);
}

}  // namespace selstream
