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

#include "selstream/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "selstream/errors.hpp"

namespace selstream {
namespace {

// RandomTree feature-moment ranges. Concepts differ in p(X) as well as in
// the labelling tree.
constexpr double kMeanLo = -0.5, kMeanHi = 0.5;
constexpr double kStdLo = 0.75, kStdHi = 1.25;
constexpr double kSkewLo = -0.5, kSkewHi = 0.5;
constexpr double kKurtLo = 0.0, kKurtHi = 1.0;
constexpr std::size_t kPilotSize = 20000;

constexpr std::size_t kWindWarmup = 2000;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int parse_int_param(const StreamSpec& spec, const std::string& key, int fallback) {
    const auto it = spec.generator_params.find(key);
    if (it == spec.generator_params.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw InvalidSpecError("generator parameter '" + key + "' is not an integer: " + it->second);
    }
}

}  // namespace

// ---- STAGGER ---------------------------------------------------------------

int stagger_label(int rule_id, int color, int size, int shape) {
    switch (rule_id) {
        case 0: return color == 0 && size == 0 ? 1 : 0;
        case 1: return color == 1 || shape == 0 ? 1 : 0;
        case 2: return size == 1 || size == 2 ? 1 : 0;
        default: throw InvalidSpecError("STAGGER rule must be 0, 1 or 2");
    }
}

std::vector<Observation> stagger_sample(const StaggerConcept& cpt, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidSpecError("sample size must be > 0");
    stagger_label(cpt.rule_id, 0, 0, 0);
    Rng rng(seed);
    std::uniform_int_distribution<int> cat(0, 2);
    std::vector<Observation> out(n);
    for (auto& o : out) {
        const int color = cat(rng), size = cat(rng), shape = cat(rng);
        o.x = {double(color), double(size), double(shape)};
        o.y = stagger_label(cpt.rule_id, color, size, shape);
    }
    return out;
}

// ---- RandomTree ------------------------------------------------------------

FeatureDistribution fit_feature_distribution(double mean, double stddev, double skew, double excess_kurtosis) {
    if (!(stddev > 0.0)) throw InvalidSpecError("feature stddev must be > 0");
    FeatureDistribution fd;
    fd.mean = mean;
    fd.stddev = stddev;
    fd.skew = skew;
    fd.excess_kurtosis = excess_kurtosis;

    auto residual = [&](const std::array<double, 3>& v) {
        const double b = v[0], c = v[1], d = v[2];
        return std::array<double, 3>{
            b * b + 6 * b * d + 2 * c * c + 15 * d * d - 1.0,
            2 * c * (b * b + 24 * b * d + 105 * d * d + 2) - skew,
            24 * (b * d + c * c * (1 + b * b + 28 * b * d) + d * d * (12 + 48 * b * d + 141 * c * c + 225 * d * d)) -
                excess_kurtosis,
        };
    };

    std::array<double, 3> v{1.0, 0.0, 0.0};
    for (int iter = 0; iter < 100; ++iter) {
        const auto f = residual(v);
        if (std::abs(f[0]) + std::abs(f[1]) + std::abs(f[2]) < 1e-13) {
            fd.b = v[0];
            fd.c = v[1];
            fd.d = v[2];
            return fd;
        }
        double J[3][3];
        for (int j = 0; j < 3; ++j) {
            auto vp = v;
            const double h = 1e-7;
            vp[j] += h;
            const auto fp = residual(vp);
            for (int i = 0; i < 3; ++i) J[i][j] = (fp[i] - f[i]) / h;
        }
        const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        if (std::abs(det) < 1e-300) break;
        // Cramer's rule for J * step = f.
        std::array<double, 3> step{};
        for (int k = 0; k < 3; ++k) {
            double M[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M[i][j] = j == k ? f[i] : J[i][j];
            step[k] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                       M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                       M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                      det;
        }
        for (int k = 0; k < 3; ++k) v[k] -= step[k];
    }
    throw InvalidSpecError("cubic transform did not converge for skew " + std::to_string(skew) + ", kurtosis " +
                           std::to_string(excess_kurtosis));
}

int RandomTreeConcept::label(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(feature_count)) throw InputError("arity mismatch in tree labelling");
    int i = 0;
    while (nodes[i].feature >= 0) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].label;
}

std::vector<int> RandomTreeConcept::leaf_depths() const {
    std::vector<int> out;
    for (const auto& n : nodes)
        if (n.feature < 0) out.push_back(n.depth);
    return out;
}

std::vector<double> random_tree_features(const RandomTreeConcept& cpt, Rng& rng) {
    std::normal_distribution<double> z;
    std::vector<double> x(cpt.features.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = cpt.features[i].transform(z(rng));
    return x;
}

RandomTreeConcept random_tree_concept(int feature_count, int class_count, int complexity, std::uint64_t seed) {
    if (feature_count < 1) throw InvalidSpecError("tree needs at least one feature");
    if (class_count < 2) throw InvalidSpecError("tree needs at least two classes");
    if (complexity < 1) throw InvalidSpecError("tree complexity must be >= 1");

    Rng rng(seed);
    RandomTreeConcept cpt;
    cpt.feature_count = feature_count;
    cpt.class_count = class_count;
    cpt.complexity = complexity;
    for (int f = 0; f < feature_count; ++f) {
        const double mean = uniform(rng, kMeanLo, kMeanHi);
        const double sd = uniform(rng, kStdLo, kStdHi);
        const double skew = uniform(rng, kSkewLo, kSkewHi);
        const double kurt = uniform(rng, kKurtLo, kKurtHi);
        cpt.features.push_back(fit_feature_distribution(mean, sd, skew, kurt));
    }

    // Thresholds are quantiles of a pilot sample so every leaf keeps mass.
    std::vector<std::vector<double>> pilot(kPilotSize);
    for (auto& x : pilot) x = random_tree_features(cpt, rng);

    struct Pending {
        int node;
        std::vector<std::uint32_t> rows;
    };
    cpt.nodes.push_back({});
    std::vector<std::uint32_t> all(kPilotSize);
    std::iota(all.begin(), all.end(), 0u);
    std::vector<Pending> todo;
    todo.push_back({0, std::move(all)});
    std::bernoulli_distribution stop(0.5);
    std::uniform_int_distribution<int> pick_feature(0, feature_count - 1);

    while (!todo.empty()) {
        Pending p = std::move(todo.back());
        todo.pop_back();
        const int depth = cpt.nodes[p.node].depth;
        bool leaf = depth >= complexity + 2 || p.rows.size() < 2;
        if (!leaf && depth >= complexity) leaf = stop(rng);
        if (leaf) continue;

        const int f = pick_feature(rng);
        std::vector<double> vals;
        vals.reserve(p.rows.size());
        for (auto r : p.rows) vals.push_back(pilot[r][f]);
        const double q = uniform(rng, 0.25, 0.75);
        auto k = static_cast<std::size_t>(q * static_cast<double>(vals.size() - 1));
        std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(k), vals.end());
        const double thr = vals[k];

        std::vector<std::uint32_t> left, right;
        for (auto r : p.rows) (pilot[r][f] <= thr ? left : right).push_back(r);

        const int l = static_cast<int>(cpt.nodes.size());
        cpt.nodes.push_back({-1, 0.0, -1, -1, 0, depth + 1});
        cpt.nodes.push_back({-1, 0.0, -1, -1, 0, depth + 1});
        auto& node = cpt.nodes[p.node];
        node.feature = f;
        node.threshold = thr;
        node.left = l;
        node.right = l + 1;
        todo.push_back({l + 1, std::move(right)});
        todo.push_back({l, std::move(left)});
    }

    std::vector<int> leaves;
    for (int i = 0; i < static_cast<int>(cpt.nodes.size()); ++i)
        if (cpt.nodes[i].feature < 0) leaves.push_back(i);
    std::vector<int> labels(leaves.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % class_count);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < leaves.size(); ++i) cpt.nodes[leaves[i]].label = labels[i];
    return cpt;
}

std::vector<Observation> random_tree_sample(const RandomTreeConcept& cpt, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidSpecError("sample size must be > 0");
    const auto classes = static_cast<std::size_t>(cpt.class_count);
    std::vector<std::size_t> quota(classes, n / classes);
    for (std::size_t c = 0; c < n % classes; ++c) ++quota[c];

    Rng rng(seed);
    std::vector<Observation> out;
    out.reserve(n);
    const std::size_t budget = 100 * n;
    for (std::size_t draws = 0; out.size() < n; ++draws) {
        if (draws >= budget)
            throw InvalidSpecError("class quotas not met after " + std::to_string(budget) + " draws");
        auto x = random_tree_features(cpt, rng);
        const int y = cpt.label(x);
        if (quota[y] == 0) continue;
        --quota[y];
        out.push_back({0, std::move(x), y, std::nullopt});
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

// ---- WIND ------------------------------------------------------------------

namespace {

struct Puff {
    double x, y, mass, travelled;
};

class WindSim {
  public:
    WindSim(const WindConcept& c, std::uint64_t seed) : c_(c), rng_(seed) {
        vx_ = c.wind_speed * std::cos(c.wind_direction);
        vy_ = c.wind_speed * std::sin(c.wind_direction);
        for (int i = 0; i < c.sensor_count; ++i) {
            const double a = 2.0 * std::numbers::pi * i / c.sensor_count;
            sx_.push_back(c.radius * std::cos(a));
            sy_.push_back(c.radius * std::sin(a));
        }
        reading_.assign(c.sensor_count, 0.0);
        max_travel_ = 12.0 * c.radius;
        for (const auto& s : c.sources) max_travel_ = std::max(max_travel_, 3.0 * std::hypot(s.x, s.y) + 6.0 * c.radius);
    }

    /// Advances one step; fills reading() and returns the noise-free target
    /// concentration.
    double step() {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> gauss;
        for (const auto& s : c_.sources) {
            const double u = unit(rng_);
            const double noise = gauss(rng_);
            if (u < s.rate) puffs_.push_back({s.x, s.y, std::max(0.0, s.strength + s.noise_sd * noise), 0.0});
        }
        for (int i = 0; i < c_.sensor_count; ++i)
            reading_[i] = std::max(0.0, concentration(sx_[i], sy_[i]) + c_.sensor_noise * gauss(rng_));
        const double target = concentration(0.0, 0.0);

        for (auto& p : puffs_) {
            p.x += vx_;
            p.y += vy_;
            p.travelled += c_.wind_speed;
        }
        std::erase_if(puffs_, [&](const Puff& p) { return p.travelled > max_travel_; });
        return target;
    }

    const std::vector<double>& reading() const { return reading_; }

  private:
    double concentration(double x, double y) const {
        double total = 0.0;
        for (const auto& p : puffs_) {
            const double sigma = c_.sigma0 + c_.sigma_growth * p.travelled;
            const double d2 = (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y);
            total += p.mass * std::exp(-d2 / (2.0 * sigma * sigma)) / (2.0 * std::numbers::pi * sigma * sigma);
        }
        return total;
    }

    const WindConcept& c_;
    Rng rng_;
    double vx_ = 0.0, vy_ = 0.0, max_travel_ = 0.0;
    std::vector<double> sx_, sy_, reading_;
    std::vector<Puff> puffs_;
};

}  // namespace

std::vector<double> quantile_thresholds(std::vector<double> values, int classes) {
    if (classes < 2) throw InvalidSpecError("need at least two classes for thresholds");
    if (values.empty()) throw InsufficientDataError("no values for thresholds");
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (int i = 1; i < classes; ++i) out.push_back(values[values.size() * static_cast<std::size_t>(i) / classes]);
    return out;
}

std::vector<double> wind_target_trace(const WindConcept& cpt, std::size_t steps, std::uint64_t seed) {
    WindSim sim(cpt, seed);
    std::vector<double> out(steps);
    for (auto& v : out) v = sim.step();
    return out;
}

WindConcept wind_concept(std::uint64_t seed, int sensor_count) {
    if (sensor_count < 3) throw InvalidSpecError("WIND needs at least 3 sensors");
    Rng rng(seed);
    WindConcept c;
    c.sensor_count = sensor_count;
    c.wind_direction = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    c.wind_speed = uniform(rng, 0.1, 0.3);
    const double ux = std::cos(c.wind_direction), uy = std::sin(c.wind_direction);
    const int count = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < count; ++i) {
        WindSource s;
        const double upwind = uniform(rng, 1.5, 4.0) * c.radius;
        const double lateral = uniform(rng, -0.8, 0.8) * c.radius;
        s.x = -ux * upwind - uy * lateral;
        s.y = -uy * upwind + ux * lateral;
        s.strength = uniform(rng, 0.5, 2.0);
        s.noise_sd = s.strength * uniform(rng, 0.0, 0.3);
        s.rate = uniform(rng, 0.1, 0.5);
        c.sources.push_back(s);
    }
    c.thresholds = quantile_thresholds(wind_target_trace(c, kWindWarmup, derive_seed(seed, kSeedThresholds)), 3);
    return c;
}

std::vector<Observation> wind_sample(const WindConcept& cpt, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidSpecError("sample size must be > 0");
    WindSim sim(cpt, seed);
    const auto s = static_cast<std::size_t>(cpt.sensor_count);
    std::vector<double> prev(s, 0.0);
    std::vector<Observation> out(n);
    for (auto& o : out) {
        const double target = sim.step();
        const auto& cur = sim.reading();
        o.x.reserve(2 * s);
        o.x.insert(o.x.end(), cur.begin(), cur.end());
        o.x.insert(o.x.end(), prev.begin(), prev.end());
        o.y = static_cast<int>(std::count_if(cpt.thresholds.begin(), cpt.thresholds.end(),
                                             [&](double t) { return target > t; }));
        prev = cur;
    }
    return out;
}

// ---- Streams ---------------------------------------------------------------

StreamSpec dataset_preset(const std::string& name) {
    StreamSpec spec;
    spec.generator = name;
    if (name == "stagger") {
        spec.concept_count = 3;
        spec.repetitions = 6;
    } else if (name == "tree") {
        spec.concept_count = 6;
        spec.repetitions = 3;
        spec.generator_params = {{"complexity", "3"}, {"features", "10"}, {"classes", "2"}};
    } else if (name == "wind") {
        spec.concept_count = 6;
        spec.repetitions = 3;
        spec.generator_params = {{"sensors", "8"}};
    } else {
        throw InvalidSpecError("unknown dataset '" + name + "' (expected stagger, tree or wind)");
    }
    return spec;
}

Stream generate_stream(const StreamSpec& spec) {
    if (spec.concept_count < 2) throw InvalidSpecError("a stream needs at least 2 concepts");
    if (spec.segment_count() < 1) throw InvalidSpecError("segment count must be >= 1");

    std::vector<ConceptId> ids(static_cast<std::size_t>(spec.concept_count));
    std::iota(ids.begin(), ids.end(), 0);
    const auto pattern = build_transition_pattern(ids, spec.pattern_decay, spec.forward_connections,
                                                  spec.transition_noise, derive_seed(spec.seed, kSeedPattern));
    const auto chain = sample_concept_chain(pattern, spec.segment_count(), derive_seed(spec.seed, kSeedChain));
    const auto need = pool_requirements(chain, spec.segment_length, spec.drift_width);

    const std::uint64_t concept_seed = derive_seed(spec.seed, kSeedConcepts);
    const std::uint64_t pool_seed = derive_seed(spec.seed, kSeedPools);
    auto cseed = [&](ConceptId c) { return derive_seed(concept_seed, static_cast<std::uint64_t>(c) + 1); };
    auto pseed = [&](ConceptId c) { return derive_seed(pool_seed, static_cast<std::uint64_t>(c) + 1); };

    Stream stream;
    ConceptPools pools;
    if (spec.generator == "stagger") {
        if (spec.concept_count > 3) throw InvalidSpecError("STAGGER has only 3 concepts");
        stream.feature_count = 3;
        stream.class_count = 2;
        for (const auto& [c, n] : need) pools[c] = stagger_sample({c}, n, pseed(c));
    } else if (spec.generator == "tree") {
        const int k = parse_int_param(spec, "features", 10);
        const int classes = parse_int_param(spec, "classes", 2);
        const int d = parse_int_param(spec, "complexity", 3);
        stream.feature_count = static_cast<std::size_t>(k);
        stream.class_count = classes;
        for (const auto& [c, n] : need) pools[c] = random_tree_sample(random_tree_concept(k, classes, d, cseed(c)), n, pseed(c));
    } else if (spec.generator == "wind") {
        const int sensors = parse_int_param(spec, "sensors", 8);
        std::vector<WindConcept> concepts;
        std::vector<double> pooled;
        for (ConceptId c : ids) {
            concepts.push_back(wind_concept(cseed(c), sensors));
            const auto trace = wind_target_trace(concepts.back(), kWindWarmup, derive_seed(cseed(c), kSeedThresholds));
            pooled.insert(pooled.end(), trace.begin(), trace.end());
        }
        const auto thresholds = quantile_thresholds(std::move(pooled), 3);
        for (auto& wc : concepts) wc.thresholds = thresholds;
        stream.feature_count = concepts.front().feature_count();
        stream.class_count = 3;
        for (const auto& [c, n] : need) pools[c] = wind_sample(concepts[static_cast<std::size_t>(c)], n, pseed(c));
    } else {
        throw InvalidSpecError("unknown generator '" + spec.generator + "'");
    }

    auto assembled = assemble_chain(chain, spec.segment_length, spec.drift_width, pools,
                                    derive_seed(spec.seed, kSeedInterleave));
    stream.observations = inject_class_noise(std::move(assembled.observations), spec.class_noise, stream.class_count,
                                             derive_seed(spec.seed, kSeedNoise));
    stream.segments = std::move(assembled.segments);
    return stream;
}

}  // namespace selstream
