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
#include <limits>
#include <random>
#include <vector>

#include "selstream/adwin.hpp"
#include "selstream/errors.hpp"
#include "selstream/generators.hpp"
#include "selstream/hoeffding_tree.hpp"

using namespace selstream;

TEST_CASE("hoeffding bound closed form") {
    CHECK(hoeffding_bound(1.0, 1e-7, 200) == doctest::Approx(std::sqrt(std::log(1e7) / 400.0)).epsilon(1e-12));
    CHECK(hoeffding_bound(1.0, 1e-7, 200) == doctest::Approx(0.2007).epsilon(1e-3));
    CHECK(hoeffding_bound(1.0, 1.0, 200) == 0.0);
}

TEST_CASE("untrained tree is uniform and predicts class 0") {
    HoeffdingTree t(3, 3);
    const std::vector<double> x{1, 2, 3};
    const auto p = t.predict_proba(x);
    for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0));
    CHECK(t.predict(x) == 0);
}

TEST_CASE("single-class stream is learned") {
    HoeffdingTree t(1, 2);
    const std::vector<double> x{0.0};
    for (int i = 0; i < 1000; ++i) t.learn_one(x, 1);
    CHECK(t.predict(x) == 1);
}

TEST_CASE("no split is attempted before the grace period") {
    HoeffdingTree t(3, 2);
    const auto pool = stagger_sample({0}, 300, 1);
    for (int i = 0; i < 199; ++i) t.learn_one(pool[i].x, pool[i].y);
    CHECK(t.split_attempts() == 0);
    t.learn_one(pool[199].x, pool[199].y);
    CHECK(t.split_attempts() == 1);
}

TEST_CASE("certain confidence splits at the first evaluation") {
    HoeffdingParams hp;
    hp.split_confidence = 1.0;
    HoeffdingTree t(3, 2, hp);
    const auto pool = stagger_sample({2}, 200, 3);
    for (const auto& o : pool) t.learn_one(o.x, o.y);
    CHECK(t.node_count() > 1);
}

TEST_CASE("arity mismatch is an input error") {
    HoeffdingTree t(3, 2);
    const std::vector<double> x{1, 2};
    CHECK_THROWS_AS(t.predict(x), InputError);
    CHECK_THROWS_AS(t.learn_one(x, 0), InputError);
}

TEST_CASE("adwin cut threshold closed form") {
    CHECK(adwin_cut_threshold(100, 0.05) == doctest::Approx(std::sqrt(std::log(80.0) / 200.0)).epsilon(1e-12));
    CHECK(adwin_cut_threshold(100, 0.05) == doctest::Approx(0.1480).epsilon(1e-3));
}

TEST_CASE("adwin stays silent on a constant stream") {
    Adwin a(0.05);
    for (int i = 0; i < 10000; ++i) CHECK_FALSE(a.add(0.5).changed);
    CHECK(a.size() == 10000);
    CHECK(a.mean() == doctest::Approx(0.5));
}

TEST_CASE("adwin detects a unit step quickly") {
    Adwin a(0.05);
    for (int i = 0; i < 500; ++i) a.add(0.0);
    int detected = -1;
    for (int i = 0; i < 500 && detected < 0; ++i)
        if (a.add(1.0).changed) detected = i;
    REQUIRE(detected >= 0);
    CHECK(detected < 100);
    CHECK(a.size() < 500);
}

TEST_CASE("adwin rejects non-finite values") {
    Adwin a;
    CHECK_THROWS_AS(a.add(std::numeric_limits<double>::quiet_NaN()), InputError);
    CHECK_THROWS_AS(a.add(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("adwin window sum stays exact under compression") {
    Adwin a(0.002);
    std::mt19937_64 rng(4);
    std::bernoulli_distribution coin(0.4);
    double sum = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const double v = coin(rng) ? 1.0 : 0.0;
        sum += v;
        REQUIRE_FALSE(a.add(v).changed);
    }
    CHECK(a.sum() == sum);
    CHECK(a.bucket_count() < 100);
}

TEST_CASE("majority classifier") {
    MajorityClassifier m(3);
    CHECK(m.predict() == 0);
    m.learn_one(2);
    m.learn_one(2);
    m.learn_one(1);
    CHECK(m.predict() == 2);
}
