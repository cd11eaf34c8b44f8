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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selstream {

using ConceptId = int;

struct Observation {
    std::size_t t = 0;
    std::vector<double> x;
    int y = 0;
    std::optional<ConceptId> concept_id;
};

struct ConceptSegment {
    ConceptId concept_id = 0;
    std::size_t length = 0;
    std::size_t drift_width = 0;  // 0 = abrupt
};

/// Row-stochastic concept transition table. Rows and columns are indexed by
/// position in `concepts`.
struct TransitionPattern {
    std::vector<ConceptId> concepts;
    std::vector<std::vector<double>> matrix;
    double decay = 0.7;
    int forward_connections = 3;
    double transition_noise = 0.0;

    std::size_t size() const { return concepts.size(); }
};

/// Everything needed to rebuild an experiment stream from a seed.
struct StreamSpec {
    std::string generator = "stagger";
    std::map<std::string, std::string> generator_params;
    int concept_count = 3;
    int repetitions = 3;
    /// Overrides repetitions * min(concept_count, 6) when set.
    std::optional<int> segments;
    std::size_t segment_length = 5000;
    std::uint64_t seed = 1;
    std::size_t drift_width = 0;
    double class_noise = 0.0;
    double pattern_decay = 0.7;
    int forward_connections = 3;
    double transition_noise = 0.0;

    int segment_count() const;
    std::size_t total_length() const { return static_cast<std::size_t>(segment_count()) * segment_length; }
};

struct Stream {
    std::vector<Observation> observations;
    std::vector<ConceptSegment> segments;
    std::size_t feature_count = 0;
    int class_count = 2;

    std::size_t size() const { return observations.size(); }
    bool has_concepts() const;
    /// Number of distinct ground-truth concept ids present.
    std::size_t distinct_concepts() const;
};

/// Circular forward-connection pattern: concepts are shuffled into a ring,
/// the f-th successor of each concept gets weight decay^f for f = 1..F, rows
/// are normalised and then mixed with the uniform row by transition_noise.
/// F is clamped to |concepts| - 1.
TransitionPattern build_transition_pattern(const std::vector<ConceptId>& concepts, double decay,
                                           int forward_connections, double transition_noise, std::uint64_t seed);

/// Random walk over `pattern` producing `count` concept ids. The first
/// concept is drawn uniformly.
std::vector<ConceptId> sample_concept_chain(const TransitionPattern& pattern, int count, std::uint64_t seed);

/// Per-concept observation pools keyed by concept id. Pool observations carry
/// x and y; t and concept_id are assigned during assembly.
using ConceptPools = std::map<ConceptId, std::vector<Observation>>;

/// Number of pool observations each concept needs for `chain`, including the
/// extra draws from the outgoing concept during gradual drift windows.
std::map<ConceptId, std::size_t> pool_requirements(const std::vector<ConceptId>& chain, std::size_t segment_length,
                                                   std::size_t drift_width);

struct AssembledStream {
    std::vector<Observation> observations;
    std::vector<ConceptSegment> segments;
};

/// Builds the observation sequence for a concept chain. Each segment consumes
/// its pool sequentially; during the first drift_width observations of every
/// segment after the first, the observation at offset i comes from the new
/// concept with probability i / drift_width and otherwise from the previous
/// one.
AssembledStream assemble_chain(const std::vector<ConceptId>& chain, std::size_t segment_length,
                               std::size_t drift_width, const ConceptPools& pools, std::uint64_t seed);

/// Samples a chain from `pattern` and assembles it. Segment count is
/// spec.segment_count().
AssembledStream assemble_stream(const StreamSpec& spec, const TransitionPattern& pattern, const ConceptPools& pools);

/// Replaces the labels of exactly floor(fraction * n) distinct observations
/// with a uniform draw over [0, class_count).
std::vector<Observation> inject_class_noise(std::vector<Observation> stream, double fraction, int class_count,
                                            std::uint64_t seed);

}  // namespace selstream
