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
#include <cstddef>
#include <random>
#include <vector>

#include "selstream/fingerprint.hpp"
#include "selstream/kernels.hpp"

namespace k = selstream::kernels;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed, bool discrete) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.3, 2.0);
    std::bernoulli_distribution coin(0.3);
    std::vector<double> x(n);
    for (auto& v : x) v = discrete ? (coin(rng) ? 1.0 : 0.0) : normal(rng);
    return x;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); }

}  // namespace

TEST_CASE("scalar kernels on small hand cases") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(k::scalar::sum(x) == 6.0);
    const auto c = k::scalar::central_sums(x, 2.0);
    CHECK(c.s2 == 2.0);
    CHECK(c.s3 == 0.0);
    CHECK(c.s4 == 2.0);
    CHECK(k::scalar::turning_points(x) == 0);
    const std::vector<double> zig{0, 1, 0, 1, 0};
    CHECK(k::scalar::turning_points(zig) == 3);
    const std::vector<double> a{1, 1}, b{1, 0}, w{1, 1};
    const auto d = k::scalar::weighted_dot3(a, b, w);
    CHECK(d.ab == 1.0);
    CHECK(d.aa == 2.0);
    CHECK(d.bb == 1.0);
}

#if defined(SELSTREAM_HAVE_AVX2)
TEST_CASE("avx2 kernels match scalar kernels") {
    if (!k::isa_available(k::Isa::avx2)) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 100u, 1001u}) {
        for (bool discrete : {false, true}) {
            CAPTURE(n);
            CAPTURE(discrete);
            const auto x = random_series(n, 17 + n, discrete);
            const auto y = random_series(n, 91 + n, discrete);
            auto w = random_series(n, 5 + n, false);
            for (auto& v : w) v = std::abs(v);
            const double mean = 0.25;
            CHECK(close(k::scalar::sum(x), k::avx2::sum(x)));
            const auto cs = k::scalar::central_sums(x, mean), ca = k::avx2::central_sums(x, mean);
            CHECK(close(cs.s2, ca.s2));
            CHECK(close(cs.s3, ca.s3));
            CHECK(close(cs.s4, ca.s4));
            CHECK(close(k::scalar::lag1_cross(x, mean), k::avx2::lag1_cross(x, mean)));
            CHECK(k::scalar::turning_points(x) == k::avx2::turning_points(x));
            const auto ds = k::scalar::weighted_dot3(x, y, w), da = k::avx2::weighted_dot3(x, y, w);
            CHECK(close(ds.ab, da.ab));
            CHECK(close(ds.aa, da.aa));
            CHECK(close(ds.bb, da.bb));
        }
    }
}

TEST_CASE("meta-features agree across forced instruction sets") {
    if (!k::isa_available(k::Isa::avx2)) return;
    const auto x = random_series(257, 3, false);
    k::force_isa(k::Isa::scalar);
    const auto s = selstream::meta_features(x);
    k::force_isa(k::Isa::avx2);
    const auto a = selstream::meta_features(x);
    k::reset_isa();
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(close(s[i], a[i]));
}
#endif

TEST_CASE("dispatch reports a usable instruction set") {
    CHECK(k::isa_available(k::Isa::scalar));
    k::force_isa(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    k::reset_isa();
    CHECK(k::isa_available(k::active_isa()));
}
