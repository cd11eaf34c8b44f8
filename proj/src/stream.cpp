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

#include "selstream/stream.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "selstream/errors.hpp"
#include "selstream/rng.hpp"

namespace selstream {

int StreamSpec::segment_count() const {
    if (segments) return *segments;
    return repetitions * std::min(concept_count, 6);
}

bool Stream::has_concepts() const {
    return !observations.empty() &&
           std::all_of(observations.begin(), observations.end(), [](const Observation& o) { return o.concept_id.has_value(); });
}

std::size_t Stream::distinct_concepts() const {
    std::set<ConceptId> ids;
    for (const auto& o : observations)
        if (o.concept_id) ids.insert(*o.concept_id);
    return ids.size();
}

TransitionPattern build_transition_pattern(const std::vector<ConceptId>& concepts, double decay,
                                           int forward_connections, double transition_noise, std::uint64_t seed) {
    const std::size_t n = concepts.size();
    if (n < 2) throw InvalidSpecError("transition pattern needs at least 2 concepts");
    if (!(decay > 0.0 && decay <= 1.0)) throw InvalidSpecError("pattern decay must be in (0, 1]");
    if (forward_connections < 1) throw InvalidSpecError("forward connections must be >= 1");
    if (!(transition_noise >= 0.0 && transition_noise <= 1.0))
        throw InvalidSpecError("transition noise must be in [0, 1]");

    const int F = std::min<int>(forward_connections, static_cast<int>(n) - 1);

    std::vector<std::size_t> ring(n);
    std::iota(ring.begin(), ring.end(), 0);
    Rng rng(seed);
    std::shuffle(ring.begin(), ring.end(), rng);

    TransitionPattern pattern;
    pattern.concepts = concepts;
    pattern.decay = decay;
    pattern.forward_connections = F;
    pattern.transition_noise = transition_noise;
    pattern.matrix.assign(n, std::vector<double>(n, 0.0));

    for (std::size_t pos = 0; pos < n; ++pos) {
        auto& row = pattern.matrix[ring[pos]];
        double weight = 1.0;
        double total = 0.0;
        for (int f = 1; f <= F; ++f) {
            weight *= decay;
            row[ring[(pos + static_cast<std::size_t>(f)) % n]] += weight;
            total += weight;
        }
        for (double& v : row) v = (1.0 - transition_noise) * (v / total) + transition_noise / static_cast<double>(n);
    }
    return pattern;
}

std::vector<ConceptId> sample_concept_chain(const TransitionPattern& pattern, int count, std::uint64_t seed) {
    if (count < 1) throw InvalidSpecError("segment count must be >= 1");
    const std::size_t n = pattern.size();
    if (n == 0) throw InvalidSpecError("empty transition pattern");
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::size_t cur = first(rng);
    std::vector<ConceptId> chain{pattern.concepts[cur]};
    chain.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i < count; ++i) {
        const auto& row = pattern.matrix[cur];
        std::discrete_distribution<std::size_t> next(row.begin(), row.end());
        cur = next(rng);
        chain.push_back(pattern.concepts[cur]);
    }
    return chain;
}

std::map<ConceptId, std::size_t> pool_requirements(const std::vector<ConceptId>& chain, std::size_t segment_length,
                                                   std::size_t drift_width) {
    std::map<ConceptId, std::size_t> need;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        need[chain[i]] += segment_length;
        if (i > 0 && drift_width > 0) need[chain[i - 1]] += drift_width;
    }
    return need;
}

AssembledStream assemble_chain(const std::vector<ConceptId>& chain, std::size_t segment_length,
                               std::size_t drift_width, const ConceptPools& pools, std::uint64_t seed) {
    if (segment_length == 0) throw InvalidSpecError("segment length must be > 0");
    if (drift_width >= segment_length) throw InvalidSpecError("drift width must be smaller than the segment length");

    std::map<ConceptId, std::size_t> cursor;
    auto draw = [&](ConceptId c) -> const Observation& {
        const auto it = pools.find(c);
        if (it == pools.end()) throw InvalidSpecError("no pool for concept " + std::to_string(c));
        std::size_t& pos = cursor[c];
        if (pos >= it->second.size()) throw InvalidSpecError("pool exhausted for concept " + std::to_string(c));
        return it->second[pos++];
    };

    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AssembledStream out;
    out.observations.reserve(chain.size() * segment_length);
    for (std::size_t s = 0; s < chain.size(); ++s) {
        const ConceptId cur = chain[s];
        const std::size_t width = s == 0 ? 0 : drift_width;
        out.segments.push_back({cur, segment_length, width});
        for (std::size_t i = 0; i < segment_length; ++i) {
            ConceptId source = cur;
            if (i < width) {
                const double p_new = static_cast<double>(i) / static_cast<double>(width);
                if (unit(rng) >= p_new) source = chain[s - 1];
            }
            Observation o = draw(source);
            o.t = out.observations.size();
            o.concept_id = source;
            out.observations.push_back(std::move(o));
        }
    }
    return out;
}

AssembledStream assemble_stream(const StreamSpec& spec, const TransitionPattern& pattern, const ConceptPools& pools) {
    const int count = spec.segment_count();
    const auto chain = sample_concept_chain(pattern, count, derive_seed(spec.seed, kSeedChain));
    return assemble_chain(chain, spec.segment_length, spec.drift_width, pools, derive_seed(spec.seed, kSeedInterleave));
}

std::vector<Observation> inject_class_noise(std::vector<Observation> stream, double fraction, int class_count,
                                            std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw InputError("noise fraction must be in [0, 1]");
    if (class_count < 1) throw InputError("class count must be >= 1");
    const auto n = stream.size();
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (k == 0) return stream;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    // Partial Fisher-Yates: the first k positions become a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::uniform_int_distribution<int> label(0, class_count - 1);
    for (std::size_t i = 0; i < k; ++i) stream[idx[i]].y = label(rng);
    return stream;
}

}  // namespace selstream
