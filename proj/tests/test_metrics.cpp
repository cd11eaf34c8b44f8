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
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "selstream/errors.hpp"
#include "selstream/evaluation.hpp"

using namespace selstream;

TEST_CASE("kappa hand cases") {
    const std::vector<int> y{0, 1, 0, 1, 1};
    CHECK(kappa(y, y) == 1.0);
    const std::vector<int> constant(10, 1);
    CHECK(kappa(constant, constant) == 1.0);
    // Marginals 0.5/0.5 on both sides with agreement 0.5 give chance level.
    const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1};
    CHECK(kappa(a, b) == doctest::Approx(0.0));
    CHECK_THROWS_AS(kappa(std::vector<int>{}, std::vector<int>{}), InputError);
}

TEST_CASE("kappa of p = 0.8 and p_c = 0.6 is 0.5") {
    // y has 24 ones in 30 rows; yhat has 20 ones, 19 of them on y = 1 rows.
    // Agreement 24/30 = 0.8; chance 0.8 * 2/3 + 0.2 * 1/3 = 0.6.
    std::vector<int> y(30, 0), yhat(30, 0);
    for (int i = 0; i < 24; ++i) y[i] = 1;
    for (int i = 0; i < 19; ++i) yhat[i] = 1;
    yhat[24] = 1;
    CHECK(oracle::kappa(y, yhat) == doctest::Approx(0.5));
    CHECK(kappa(y, yhat) == doctest::Approx(0.5));
}

TEST_CASE("c-f1 hand cases") {
    const std::vector<int> c{0, 0, 1, 1, 2, 2};
    CHECK(c_f1(std::vector<int>{5, 5, 7, 7, 9, 9}, c) == 1.0);
    const std::vector<int> two{0, 0, 1, 1}, single(4, 3);
    CHECK(c_f1(single, two) == doctest::Approx(2.0 / 3.0));
    // A state covering half of concept 0 and nothing else: F1 = 2/3 for concept 0.
    const std::vector<int> cc{0, 0, 0, 0, 1, 1, 1, 1}, ss{1, 1, 2, 2, 3, 3, 3, 3};
    CHECK(oracle::c_f1(ss, cc) == doctest::Approx((2.0 / 3.0 + 1.0) / 2.0));
    CHECK(c_f1(ss, cc) == doctest::Approx((2.0 / 3.0 + 1.0) / 2.0));
}

TEST_CASE("c-f1 is invariant under state relabelling") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> d(0, 4);
    std::vector<int> s(500), c(500), r(500);
    for (std::size_t i = 0; i < 500; ++i) {
        s[i] = d(rng);
        c[i] = d(rng) % 3;
        r[i] = 100 - 7 * s[i];
    }
    CHECK(c_f1(s, c) == c_f1(r, c));
}

TEST_CASE("metrics match brute force on random traces") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5000)(rng);
        const int classes = std::uniform_int_distribution<int>(2, 4)(rng);
        const int states = std::uniform_int_distribution<int>(1, 8)(rng);
        std::uniform_int_distribution<int> cl(0, classes - 1), st(0, states - 1), cc(0, 3);
        std::vector<int> y(n), p(n), s(n), c(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = cl(rng);
            p[i] = rng() % 3 == 0 ? y[i] : cl(rng);
            s[i] = st(rng);
            c[i] = cc(rng);
        }
        CHECK(std::abs(kappa(y, p) - oracle::kappa(y, p)) <= 1e-12);
        CHECK(std::abs(c_f1(s, c) - oracle::c_f1(s, c)) <= 1e-12);
    }
}

TEST_CASE("random predictions have near-zero kappa") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::bernoulli_distribution coin(0.5);
        std::vector<int> y(10000), p(10000);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = coin(rng);
            p[i] = coin(rng);
        }
        CHECK(std::abs(kappa(y, p)) <= 0.05);
    }
}

TEST_CASE("aggregation") {
    const std::vector<double> one{0.7}, two{0.9, 1.0};
    CHECK(summarize_values(one).std == 0.0);
    const auto r = summarize_values(two);
    CHECK(r.mean == doctest::Approx(0.95));
    CHECK(r.std == doctest::Approx(0.0707).epsilon(1e-3));

    std::vector<RunResult> results(4);
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& x = results[i];
        x.system = i % 2 ? "lb" : "select";
        x.dataset = "stagger";
        x.y = {0, 1, 1, 0};
        x.prediction = {0, 1, 0, 0};
        x.active = {1, 1, 2, 2};
        x.concept_id = {0, 0, 1, 1};
        x.summarize();
    }
    const auto rows = aggregate(results);
    CHECK(rows.size() == 2 * 5);
    for (const auto& row : rows) CHECK(row.n == 2);
    std::ostringstream csv;
    write_summary_csv(rows, csv);
    CHECK(csv.str().rfind("system,dataset,metric,n,mean,std\n", 0) == 0);
}

TEST_CASE("summary accuracy equals trace accuracy") {
    RunResult r;
    r.y = {0, 1, 1, 0, 1};
    r.prediction = {0, 1, 0, 0, 0};
    r.active = {0, 0, 0, 0, 0};
    r.summarize();
    CHECK(r.accuracy == accuracy(r.y, r.prediction));
    CHECK(r.accuracy == doctest::Approx(0.6));
    CHECK_FALSE(r.c_f1.has_value());
    CHECK(rolling_accuracy(r.y, r.prediction).size() == 5);
    CHECK(count_switches(std::vector<int>{1, 1, 2, 2, 1}) == 2);
}
