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

#include <cstddef>
#include <span>
#include <vector>

namespace selstream {

enum class LeafPrediction { majority, naive_bayes, naive_bayes_adaptive };

struct HoeffdingParams {
    int grace_period = 200;
    double split_confidence = 1e-7;
    double tie_threshold = 0.05;
    LeafPrediction leaf_prediction = LeafPrediction::naive_bayes_adaptive;
    int split_candidates = 10;
    /// Minimum share of the leaf weight each branch of a split must receive.
    double min_branch_fraction = 0.01;
};

/// sqrt(R^2 ln(1/delta) / (2n))
double hoeffding_bound(double range, double delta, double n);

/// Incremental decision tree for numeric features (VFDT). Leaves keep class
/// counts and a Gaussian estimator per (feature, class); candidate splits are
/// evenly spaced thresholds between the observed min and max.
class HoeffdingTree {
  public:
    HoeffdingTree(std::size_t feature_count, int class_count, HoeffdingParams params = {});

    /// Argmax of predict_proba; ties go to the lowest class.
    int predict(std::span<const double> x) const;
    /// Uniform when the reached leaf has seen nothing.
    std::vector<double> predict_proba(std::span<const double> x) const;
    void learn_one(std::span<const double> x, int y);

    std::size_t feature_count() const { return features_; }
    int class_count() const { return classes_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const;
    std::size_t split_attempts() const { return split_attempts_; }
    std::size_t trained() const { return trained_; }
    const HoeffdingParams& params() const { return params_; }

  private:
    struct Gaussian {
        double n = 0.0, mean = 0.0, m2 = 0.0;
        double lo = 0.0, hi = 0.0;
        void add(double v);
        double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
        /// Estimated weight at or below `thr`.
        double weight_below(double thr) const;
    };

    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1, right = -1;
        std::vector<double> counts;
        std::vector<Gaussian> stats;  // feature-major: stats[f * classes + c]
        double weight_at_eval = 0.0;
        double mc_correct = 0.0, nb_correct = 0.0;
        bool is_leaf() const { return feature < 0; }
    };

    void check_arity(std::span<const double> x) const;
    int leaf_for(std::span<const double> x) const;
    void init_leaf(Node& n, std::vector<double> counts) const;
    std::vector<double> mc_proba(const Node& n) const;
    std::vector<double> nb_proba(const Node& n, std::span<const double> x) const;
    void try_split(int leaf);

    std::size_t features_;
    int classes_;
    HoeffdingParams params_;
    std::vector<Node> nodes_;
    std::size_t split_attempts_ = 0;
    std::size_t trained_ = 0;
};

/// Predicts the most frequent label seen so far (ties to the lowest).
class MajorityClassifier {
  public:
    explicit MajorityClassifier(int class_count) : counts_(static_cast<std::size_t>(class_count), 0) {}
    int predict() const;
    void learn_one(int y);

  private:
    std::vector<std::size_t> counts_;
};

}  // namespace selstream
