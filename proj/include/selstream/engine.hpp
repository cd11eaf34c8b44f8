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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "selstream/adwin.hpp"
#include "selstream/fingerprint.hpp"
#include "selstream/hoeffding_tree.hpp"
#include "selstream/stream.hpp"
#include "selstream/transition_matrix.hpp"

namespace selstream {

struct SelectParams {
    double hoeffding_risk = 0.75;
    double min_state_likelihood = 0.005;
    double b_prior_multiplier = 0.4;
    double min_prior = 0.7;
    double multihop_multiplier = 0.7;
    int multihop_steps = 3;
    double prev_state_prior = 50.0;
    double merge_correlation = 0.95;
    int state_grace = 10;
    std::size_t window = 100;
    double buffer_ratio = 0.2;
    double drift_delta = 0.05;

    double state_estimator_risk = 0.5;  // ADWIN risk of the posterior histories
    std::size_t fingerprint_period = 15;
    double min_window_ratio = 0.65;
    double sim_std_min = 0.05;
    double sim_std_max = 0.175;
    std::size_t merge_period = 500;
    std::size_t merge_history = 1000;
    std::size_t merge_min_overlap = 30;
    /// Representation merging tolerance in similarity standard deviations;
    /// negative disables it.
    double merge_similarity_margin = 1.0;
    /// Captures kept per state for measuring its similarity distribution.
    std::size_t similarity_history = 300;
    Normalization normalization = Normalization::minmax;

    bool uniform_prior = false;   // S_p
    bool map_selection = false;   // S_MAP
    bool merging = true;          // false for S_m
    double sparse_accept = 0.5;   // sparse mode re-identification threshold

    HoeffdingParams tree;

    std::size_t buffer_size() const;
    std::size_t min_window() const;
};

enum class EngineMode { select, sparse };

struct StepResult {
    int prediction = 0;
    int active_state = 0;
    bool transition = false;
    bool drift = false;  // D^t used for this step's prior
    bool alert = false;  // the detector fired at this step
};

/// Per-state quantities of the last step.
struct StateScore {
    int id = 0;
    double similarity = 0.0;  // a_j; NaN when not computed
    double sim_mean = 0.0;
    double sim_std = 0.0;     // clamped value used as the Gaussian scale
    double likelihood = 0.0;
    double posterior = 0.0;
};

/// A transition's supporting numbers (selection-optimality log).
struct TransitionEvent {
    std::size_t t = 0;
    int from = 0;
    int to = 0;
    bool promoted = false;
    double mu0 = 0.0, mu1 = 0.0, epsilon = 0.0;
};

/// Test-then-train engine over a repository of states plus a background
/// state B. In select mode every step scores all states (prior x
/// likelihood) and switches through a Hoeffding-bound test on ADWIN-managed
/// posterior histories. In sparse mode states are reconsidered only when the
/// detector on the active state's likelihood fires.
class Engine {
  public:
    Engine(std::size_t feature_count, int class_count, SelectParams params = {}, EngineMode mode = EngineMode::select);
    ~Engine();
    Engine(Engine&&) noexcept;
    Engine& operator=(Engine&&) noexcept;

    StepResult step(const Observation& obs);

    int active_id() const;
    /// Ids of repository states (B excluded), ascending.
    std::vector<int> repository_ids() const;
    std::size_t repository_size() const;
    /// B is reported with this id in posterior vectors.
    static constexpr int kBackgroundId = -1;
    /// (id, posterior) for R then B, from the last step.
    const std::vector<std::pair<int, double>>& posteriors() const;
    /// Priors over R from the last step (select mode), repository order.
    const std::vector<double>& priors() const;
    const std::vector<double>& likelihoods() const;
    /// R then B, from the last step.
    const std::vector<StateScore>& scores() const;
    const TransitionMatrices& matrices() const;
    const std::vector<TransitionEvent>& transitions() const;
    std::size_t merges() const;
    std::size_t alerts() const;
    const SelectParams& params() const;

    /// Exposed for tests: the active state's representation.
    const ConceptRepresentation& active_representation() const;
    std::size_t active_captures() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Pearson correlation; 0 when either series has zero variance or fewer
/// than 2 points.
double pearson(std::span<const double> a, std::span<const double> b);

/// Standard normal CDF.
double normal_cdf(double z);

/// Lower-tail Gaussian likelihood of a similarity, clamped below.
double similarity_likelihood(double a, double mu, double sigma, double floor);

/// eps = sqrt(ln(2/delta) / (2 m)), m = 2 / (1/w0 + 1/w1).
double selection_epsilon(double w0, double w1, double delta);

}  // namespace selstream
