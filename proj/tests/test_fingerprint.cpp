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


#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "selstream/engine.hpp"
#include "selstream/errors.hpp"
#include "selstream/fingerprint.hpp"

using namespace selstream;

TEST_CASE("meta-features of hand series") {
    const std::vector<double> a{1, 2, 3};
    const auto m = meta_features(a);
    CHECK(m[0] == doctest::Approx(2.0));
    CHECK(m[1] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(m[2] == doctest::Approx(0.0));
    CHECK(m[5] == 0.0);

    const std::vector<double> c(10, 4.5);
    const auto mc = meta_features(c);
    CHECK(mc[0] == 4.5);
    for (std::size_t i = 1; i < 6; ++i) CHECK(mc[i] == 0.0);

    const std::vector<double> zig{0, 1, 0, 1, 0};
    CHECK(meta_features(zig)[5] == doctest::Approx(1.0));
    CHECK_THROWS_AS(meta_features(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("error distances") {
    std::vector<double> e(12, 0.0);
    e[2] = e[5] = e[9] = 1.0;
    CHECK(error_distances(e) == std::vector<double>{3, 4});
    CHECK(error_distances(std::vector<double>(5, 0.0)) == std::vector<double>{0});
}

TEST_CASE("behaviour sources") {
    const std::vector<std::vector<double>> x{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    const std::vector<int> y{0, 1, 1}, pred{0, 1, 1};
    const auto s = extract_behaviour_sources(x, y, pred);
    CHECK(s.series.size() == 7);
    CHECK(behaviour_source_count(3) == 7);
    CHECK(fingerprint_dimension(3) == 42);
    bool found_errors = false;
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        if (s.names[i] == "errors") {
            found_errors = true;
            for (double v : s.series[i]) CHECK(v == 0.0);
        }
        if (s.names[i] == "error_distances") CHECK(s.series[i] == std::vector<double>{0});
    }
    CHECK(found_errors);
    CHECK(fingerprint_of(s).size() == 42);
    CHECK_THROWS_AS(extract_behaviour_sources({}, {}, {}), InsufficientDataError);
}

TEST_CASE("weighted cosine similarity") {
    const std::vector<double> a{1, 1}, b{1, 0}, c{0, 1}, w{1, 1};
    CHECK(weighted_cosine_similarity(a, a, std::vector<double>{2, 3}) == doctest::Approx(1.0));
    CHECK(weighted_cosine_similarity(b, c, w) == doctest::Approx(0.0));
    CHECK(weighted_cosine_similarity(a, b, w) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(weighted_cosine_similarity(std::vector<double>{0, 0}, a, w) == 0.0);
    CHECK_THROWS_AS(weighted_cosine_similarity(a, std::vector<double>{1, 2, 3}, w), InputError);
}

namespace {
ConceptRepresentation rep_of(const std::vector<std::vector<double>>& rows) {
    ConceptRepresentation r(rows.front().size());
    for (const auto& v : rows) r.add(v);
    return r;
}
}  // namespace

TEST_CASE("fisher weights") {
    std::vector<std::vector<double>> lo, hi;
    for (int i = 0; i < 5; ++i) {
        lo.push_back({-1.0, 2.0});
        lo.push_back({1.0, 2.0});
        hi.push_back({9.0, 2.0});
        hi.push_back({11.0, 2.0});
    }
    const auto a = rep_of(lo), b = rep_of(hi);
    const ConceptRepresentation* one[] = {&a};
    for (double v : fisher_weights(one)) CHECK(v == 1.0);
    const ConceptRepresentation* two[] = {&a, &b};
    const auto w = fisher_weights(two);
    CHECK(w[0] == doctest::Approx(500.0 / (20.0 + 1e-6)).epsilon(1e-12));
    CHECK(w[0] == doctest::Approx(25.0).epsilon(1e-6));
    CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("running statistics match batch recomputation") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(3.0, 7.0);
    std::vector<std::vector<double>> rows(1000, std::vector<double>(4));
    for (auto& r : rows)
        for (auto& v : r) v = g(rng);
    const auto rep = rep_of(rows);
    const auto sd = rep.stddev();
    for (std::size_t k = 0; k < 4; ++k) {
        double mean = 0.0, ss = 0.0;
        for (const auto& r : rows) mean += r[k];
        mean /= rows.size();
        for (const auto& r : rows) ss += (r[k] - mean) * (r[k] - mean);
        CHECK(std::abs(rep.mean()[k] - mean) < 1e-9);
        CHECK(std::abs(sd[k] - std::sqrt(ss / rows.size())) < 1e-9);
    }
    RunningStats s;
    for (const auto& r : rows) s.add(r[0]);
    CHECK(std::abs(s.mean() - rep.mean()[0]) < 1e-9);
    CHECK(std::abs(s.stddev() - sd[0]) < 1e-9);
}

TEST_CASE("minmax normaliser maps the observed range onto [-0.5, 0.5]") {
    Normalizer n(2);
    n.update(std::vector<double>{0.0, 5.0});
    n.update(std::vector<double>{10.0, 5.0});
    std::vector<double> out(2);
    n.apply(std::vector<double>{10.0, 5.0}, out);
    CHECK(out[0] == doctest::Approx(0.5));
    CHECK(out[1] == 0.0);
    n.apply(std::vector<double>{0.0, 7.0}, out);
    CHECK(out[0] == doctest::Approx(-0.5));
    CHECK(out[1] == 0.0);
}

TEST_CASE("behaviour windows") {
    SelectParams p;
    CHECK(p.buffer_size() == 20);
    CHECK(p.min_window() == 65);
    BehaviourWindows w(1, 100, 20);
    const std::vector<double> x{0.0};
    w.push(x, 0);  // arrives at t = 0
    for (int i = 0; i < 19; ++i) w.push(x, 0);
    CHECK(w.stable().size() == 0);
    w.push(x, 0);  // t = 0 is now 20 steps old
    CHECK(w.stable().begin == 0);
    CHECK(w.stable().size() == 1);
    for (int i = 0; i < 200; ++i) w.push(x, 0);
    CHECK(w.stable().size() == 100);
    CHECK(w.head().size() == 100);
    w.flush();
    CHECK(w.stable().size() == 0);
    CHECK(w.head().size() == 100);
}
