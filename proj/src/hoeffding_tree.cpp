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

#include "selstream/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "selstream/errors.hpp"

namespace selstream {
namespace {

constexpr double kNbStdFloor = 1e-9;
constexpr double kNbMissLogDensity = -30.0;

double entropy(const std::vector<double>& counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0) h -= (c / total) * std::log2(c / total);
    return h;
}

int argmax(const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double hoeffding_bound(double range, double delta, double n) {
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

void HoeffdingTree::Gaussian::add(double v) {
    if (n == 0.0) {
        lo = hi = v;
    } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    n += 1.0;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
}

double HoeffdingTree::Gaussian::weight_below(double thr) const {
    if (n == 0.0) return 0.0;
    if (thr < lo) return 0.0;
    if (thr >= hi) return n;
    const double sd = std::sqrt(variance());
    if (sd <= 0.0) return mean <= thr ? n : 0.0;
    return n * 0.5 * std::erfc(-(thr - mean) / (sd * std::numbers::sqrt2));
}

HoeffdingTree::HoeffdingTree(std::size_t feature_count, int class_count, HoeffdingParams params)
    : features_(feature_count), classes_(class_count), params_(params) {
    if (feature_count == 0) throw InputError("tree needs at least one feature");
    if (class_count < 1) throw InputError("tree needs at least one class");
    if (params.grace_period < 1) throw InputError("grace period must be >= 1");
    if (!(params.split_confidence > 0.0 && params.split_confidence <= 1.0))
        throw InputError("split confidence must be in (0, 1]");
    nodes_.emplace_back();
    init_leaf(nodes_.back(), std::vector<double>(static_cast<std::size_t>(classes_), 0.0));
}

std::size_t HoeffdingTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

void HoeffdingTree::check_arity(std::span<const double> x) const {
    if (x.size() != features_)
        throw InputError("expected " + std::to_string(features_) + " features, got " + std::to_string(x.size()));
}

int HoeffdingTree::leaf_for(std::span<const double> x) const {
    int i = 0;
    while (!nodes_[i].is_leaf()) i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    return i;
}

void HoeffdingTree::init_leaf(Node& n, std::vector<double> counts) const {
    n.counts = std::move(counts);
    n.stats.assign(features_ * static_cast<std::size_t>(classes_), Gaussian{});
    double total = 0.0;
    for (double c : n.counts) total += c;
    n.weight_at_eval = total;
}

std::vector<double> HoeffdingTree::mc_proba(const Node& n) const {
    double total = 0.0;
    for (double c : n.counts) total += c;
    std::vector<double> p(static_cast<std::size_t>(classes_), 1.0 / classes_);
    if (total > 0.0)
        for (int c = 0; c < classes_; ++c) p[c] = n.counts[c] / total;
    return p;
}

std::vector<double> HoeffdingTree::nb_proba(const Node& n, std::span<const double> x) const {
    double total = 0.0;
    for (double c : n.counts) total += c;
    if (total <= 0.0) return mc_proba(n);
    std::vector<double> logp(static_cast<std::size_t>(classes_), -std::numeric_limits<double>::infinity());
    for (int c = 0; c < classes_; ++c) {
        if (n.counts[c] <= 0.0) continue;
        double lp = std::log(n.counts[c] / total);
        for (std::size_t f = 0; f < features_; ++f) {
            const auto& g = n.stats[f * classes_ + c];
            if (g.n == 0.0) continue;
            const double sd = std::sqrt(g.variance());
            if (!(sd > kNbStdFloor)) {
                // A degenerate estimator has unit density at its value so a
                // handful of identical samples cannot outweigh the class prior.
                lp += x[f] == g.mean ? 0.0 : kNbMissLogDensity;
                continue;
            }
            const double z = (x[f] - g.mean) / sd;
            lp += -0.5 * z * z - std::log(sd * std::sqrt(2.0 * std::numbers::pi));
        }
        logp[c] = lp;
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    std::vector<double> p(logp.size());
    double s = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) s += p[c] = std::exp(logp[c] - top);
    for (double& v : p) v /= s;
    return p;
}

std::vector<double> HoeffdingTree::predict_proba(std::span<const double> x) const {
    check_arity(x);
    const Node& n = nodes_[leaf_for(x)];
    switch (params_.leaf_prediction) {
        case LeafPrediction::majority: return mc_proba(n);
        case LeafPrediction::naive_bayes: return nb_proba(n, x);
        case LeafPrediction::naive_bayes_adaptive:
            return n.nb_correct > n.mc_correct ? nb_proba(n, x) : mc_proba(n);
    }
    return mc_proba(n);
}

int HoeffdingTree::predict(std::span<const double> x) const { return argmax(predict_proba(x)); }

void HoeffdingTree::learn_one(std::span<const double> x, int y) {
    check_arity(x);
    if (y < 0 || y >= classes_) throw InputError("label " + std::to_string(y) + " outside [0, " + std::to_string(classes_) + ")");
    const int li = leaf_for(x);
    Node& n = nodes_[li];

    if (params_.leaf_prediction == LeafPrediction::naive_bayes_adaptive) {
        if (argmax(mc_proba(n)) == y) n.mc_correct += 1.0;
        if (argmax(nb_proba(n, x)) == y) n.nb_correct += 1.0;
    }
    n.counts[y] += 1.0;
    for (std::size_t f = 0; f < features_; ++f) n.stats[f * classes_ + y].add(x[f]);
    ++trained_;

    double total = 0.0;
    for (double c : n.counts) total += c;
    if (total - n.weight_at_eval >= params_.grace_period) {
        n.weight_at_eval = total;
        try_split(li);
    }
}

void HoeffdingTree::try_split(int leaf) {
    ++split_attempts_;
    const Node& n = nodes_[leaf];
    int nonzero = 0;
    double total = 0.0;
    for (double c : n.counts) {
        total += c;
        if (c > 0.0) ++nonzero;
    }
    if (nonzero < 2) return;

    const double parent_h = entropy(n.counts);
    struct Candidate {
        double merit = 0.0;
        int feature = -1;
        double threshold = 0.0;
        std::vector<double> left, right;
    };
    std::vector<Candidate> best_per_feature;
    const auto C = static_cast<std::size_t>(classes_);

    for (std::size_t f = 0; f < features_; ++f) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t c = 0; c < C; ++c) {
            const auto& g = n.stats[f * C + c];
            if (g.n == 0.0) continue;
            lo = std::min(lo, g.lo);
            hi = std::max(hi, g.hi);
        }
        Candidate best;
        if (!(hi > lo)) {
            best_per_feature.push_back(std::move(best));
            continue;
        }
        const int k = params_.split_candidates;
        for (int i = 1; i <= k; ++i) {
            const double thr = lo + (hi - lo) * i / (k + 1);
            std::vector<double> left(C), right(C);
            double wl = 0.0, wr = 0.0;
            for (std::size_t c = 0; c < C; ++c) {
                const double below = n.stats[f * C + c].weight_below(thr);
                left[c] = below;
                right[c] = n.counts[c] - below;
                wl += left[c];
                wr += right[c];
            }
            const double w = wl + wr;
            if (w <= 0.0 || wl < params_.min_branch_fraction * w || wr < params_.min_branch_fraction * w) continue;
            const double merit = parent_h - (wl / w) * entropy(left) - (wr / w) * entropy(right);
            if (merit > best.merit) {
                best.merit = merit;
                best.feature = static_cast<int>(f);
                best.threshold = thr;
                best.left = std::move(left);
                best.right = std::move(right);
            }
        }
        best_per_feature.push_back(std::move(best));
    }

    std::sort(best_per_feature.begin(), best_per_feature.end(),
              [](const Candidate& a, const Candidate& b) { return a.merit > b.merit; });
    const Candidate& g1 = best_per_feature[0];
    const double g2 = best_per_feature.size() > 1 ? best_per_feature[1].merit : 0.0;
    const double eps = hoeffding_bound(std::log2(static_cast<double>(std::max(classes_, 2))),
                                       params_.split_confidence, total);
    if (g1.feature < 0 || g1.merit <= 0.0) return;
    if (!(g1.merit - g2 > eps || eps < params_.tie_threshold)) return;

    Node left_node, right_node;
    init_leaf(left_node, g1.left);
    init_leaf(right_node, g1.right);
    const int l = static_cast<int>(nodes_.size());
    const int f = g1.feature;
    const double thr = g1.threshold;
    nodes_.push_back(std::move(left_node));
    nodes_.push_back(std::move(right_node));
    Node& parent = nodes_[leaf];  // re-fetch: push_back may reallocate
    parent.feature = f;
    parent.threshold = thr;
    parent.left = l;
    parent.right = l + 1;
    parent.counts.clear();
    parent.stats.clear();
    parent.stats.shrink_to_fit();
}

int MajorityClassifier::predict() const {
    return static_cast<int>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
}

void MajorityClassifier::learn_one(int y) {
    if (y < 0 || static_cast<std::size_t>(y) >= counts_.size()) throw InputError("label out of range");
    ++counts_[static_cast<std::size_t>(y)];
}

}  // namespace selstream
