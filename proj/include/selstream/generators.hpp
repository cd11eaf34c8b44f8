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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "selstream/rng.hpp"
#include "selstream/stream.hpp"

namespace selstream {

// ---- STAGGER ---------------------------------------------------------------
// Ordinal encoding: color red=0 green=1 blue=2; size small=0 medium=1
// large=2; shape circle=0 square=1 triangle=2.

struct StaggerConcept {
    int rule_id = 0;
};

/// rule 0: red and small; rule 1: green or circle; rule 2: medium or large.
int stagger_label(int rule_id, int color, int size, int shape);

std::vector<Observation> stagger_sample(const StaggerConcept& cpt, std::size_t n, std::uint64_t seed);

// ---- RandomTree ------------------------------------------------------------

/// Target moments of one feature plus the fitted cubic transform
/// y = a + b z + c z^2 + d z^3 (a = -c) applied to z ~ N(0, 1).
struct FeatureDistribution {
    double mean = 0.0;
    double stddev = 1.0;
    double skew = 0.0;
    double excess_kurtosis = 0.0;
    double b = 1.0;
    double c = 0.0;
    double d = 0.0;

    double transform(double z) const { return mean + stddev * (-c + z * (b + z * (c + z * d))); }
};

/// Fits b, c, d so that the cubic of a standard normal has the given skew
/// and excess kurtosis (zero mean, unit variance). Throws InvalidSpecError
/// when Newton iteration does not converge.
FeatureDistribution fit_feature_distribution(double mean, double stddev, double skew, double excess_kurtosis);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // x[feature] <= threshold
    int right = -1;
    int label = 0;
    int depth = 0;
};

struct RandomTreeConcept {
    int feature_count = 10;
    int class_count = 2;
    int complexity = 3;
    std::vector<FeatureDistribution> features;
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int label(std::span<const double> x) const;
    std::vector<int> leaf_depths() const;
};

RandomTreeConcept random_tree_concept(int feature_count, int class_count, int complexity, std::uint64_t seed);

/// Raw draw from the concept's feature distribution (no labels).
std::vector<double> random_tree_features(const RandomTreeConcept& cpt, Rng& rng);

/// Class-balanced pool: per-class quotas are exact (n / classes, remainder to
/// the lowest classes) and the accepted draws are shuffled. Throws
/// InvalidSpecError if quotas are not met after 100 * n draws.
std::vector<Observation> random_tree_sample(const RandomTreeConcept& cpt, std::size_t n, std::uint64_t seed);

// ---- WIND ------------------------------------------------------------------

struct WindSource {
    double x = 0.0;
    double y = 0.0;
    double strength = 1.0;
    double noise_sd = 0.0;
    double rate = 0.3;  // emission probability per step
};

struct WindConcept {
    std::vector<WindSource> sources;
    double wind_speed = 0.2;      // distance per step
    double wind_direction = 0.0;  // radians, direction the wind blows towards
    int sensor_count = 8;
    double radius = 1.0;
    double sigma0 = 0.2;
    double sigma_growth = 0.15;
    double sensor_noise = 0.005;
    /// Ascending; label = number of thresholds strictly below the noise-free
    /// target concentration.
    std::vector<double> thresholds;

    int class_count() const { return static_cast<int>(thresholds.size()) + 1; }
    std::size_t feature_count() const { return 2 * static_cast<std::size_t>(sensor_count); }
};

/// Random concept with 1-3 upwind sources. Thresholds are the terciles of a
/// 2000-step warmup of this concept alone.
WindConcept wind_concept(std::uint64_t seed, int sensor_count = 8);

/// Noise-free target concentrations of a `steps`-long run (used for
/// thresholds and tests).
std::vector<double> wind_target_trace(const WindConcept& cpt, std::size_t steps, std::uint64_t seed);

/// Continuous simulation of n steps. Features are the current readings of the
/// ring sensors followed by their previous readings.
std::vector<Observation> wind_sample(const WindConcept& cpt, std::size_t n, std::uint64_t seed);

/// Tercile-style cut points: the i/classes quantiles for i = 1..classes-1.
std::vector<double> quantile_thresholds(std::vector<double> values, int classes);

// ---- Streams ---------------------------------------------------------------

/// Defaults for a named dataset: stagger (3 concepts, 18 segments), tree and
/// wind (6 concepts x 3 repetitions). Unknown names throw InvalidSpecError.
StreamSpec dataset_preset(const std::string& name);

/// Builds concepts, pools and the transition pattern for `spec`, assembles
/// the stream and injects class noise. Deterministic in spec.
Stream generate_stream(const StreamSpec& spec);

}  // namespace selstream
