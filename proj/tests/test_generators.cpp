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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "selstream/errors.hpp"
#include "selstream/generators.hpp"

using namespace selstream;

namespace {
// Independent rule table: red=0 green=1 blue=2, small=0 medium=1 large=2,
// circle=0 square=1 triangle=2.
int stagger_oracle(int rule, int color, int size, int shape) {
    if (rule == 0) return color == 0 && size == 0;
    if (rule == 1) return color == 1 || shape == 0;
    return size == 1 || size == 2;
}
}  // namespace

TEST_CASE("stagger rules") {
    CHECK(stagger_label(0, 0, 0, 2) == 1);  // red small triangle
    CHECK(stagger_label(0, 2, 2, 0) == 0);  // blue large circle
    CHECK(stagger_label(2, 0, 1, 1) == 1);  // red medium square
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int s = 0; s < 3; ++s)
                for (int h = 0; h < 3; ++h) CHECK(stagger_label(r, c, s, h) == stagger_oracle(r, c, s, h));
    CHECK_THROWS_AS(stagger_label(3, 0, 0, 0), InvalidSpecError);
}

TEST_CASE("stagger pools follow their rule") {
    const auto pool = stagger_sample({1}, 500, 4);
    for (const auto& o : pool) {
        REQUIRE(o.x.size() == 3);
        CHECK(o.y == stagger_oracle(1, int(o.x[0]), int(o.x[1]), int(o.x[2])));
    }
}

TEST_CASE("random tree leaves lie between d and d + 2") {
    for (int d : {1, 3}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto t = random_tree_concept(10, 2, d, seed);
            for (int depth : t.leaf_depths()) {
                CHECK(depth >= d);
                CHECK(depth <= d + 2);
            }
        }
    }
}

TEST_CASE("zero skew and excess kurtosis give an affine transform") {
    const auto fd = fit_feature_distribution(2.0, 3.0, 0.0, 0.0);
    CHECK(fd.b == doctest::Approx(1.0));
    CHECK(fd.c == doctest::Approx(0.0));
    CHECK(fd.d == doctest::Approx(0.0));
    for (double z : {-2.0, -0.5, 0.0, 1.3}) CHECK(fd.transform(z) == doctest::Approx(2.0 + 3.0 * z));
}

TEST_CASE("random tree pools are balanced and deterministic") {
    const auto cpt = random_tree_concept(10, 2, 3, 8);
    const auto a = random_tree_sample(cpt, 1000, 21);
    const auto b = random_tree_sample(cpt, 1000, 21);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ones += a[i].y == 1;
        CHECK(a[i].y == cpt.label(a[i].x));
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
    CHECK(ones >= 480);
    CHECK(ones <= 520);
}

TEST_CASE("wind without sources reads noise and lowest class") {
    WindConcept c;
    c.thresholds = {0.1, 0.2};
    const auto obs = wind_sample(c, 300, 2);
    for (const auto& o : obs) {
        CHECK(o.y == 0);
        CHECK(o.x.size() == 16);
        for (double v : o.x) CHECK(v < 0.05);
    }
    CHECK(wind_concept(3).feature_count() == 16);
}

TEST_CASE("an upwind source pollutes the target more than a downwind one") {
    WindConcept c;
    c.wind_direction = 0.7;
    c.wind_speed = 0.2;
    const double ux = std::cos(c.wind_direction), uy = std::sin(c.wind_direction);
    WindSource s;
    s.x = -2.5 * ux;
    s.y = -2.5 * uy;
    c.sources = {s};
    WindConcept d = c;
    d.sources[0].x = -s.x;
    d.sources[0].y = -s.y;
    const auto up = wind_target_trace(c, 3000, 5), down = wind_target_trace(d, 3000, 5);
    const double mu = std::accumulate(up.begin(), up.end(), 0.0) / up.size();
    const double md = std::accumulate(down.begin(), down.end(), 0.0) / down.size();
    CHECK(mu > md);
}

TEST_CASE("unknown dataset names are rejected") {
    CHECK_THROWS_AS(dataset_preset("nope"), InvalidSpecError);
}
