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

#include <atomic>

#include "selstream/errors.hpp"
#include "selstream/kernels.hpp"

namespace selstream::kernels {

namespace {

struct Table {
    double (*sum)(std::span<const double>);
    CentralSums (*central_sums)(std::span<const double>, double);
    double (*lag1_cross)(std::span<const double>, double);
    std::size_t (*turning_points)(std::span<const double>);
    Dot3 (*weighted_dot3)(std::span<const double>, std::span<const double>, std::span<const double>);
};

constexpr Table kScalar{&scalar::sum, &scalar::central_sums, &scalar::lag1_cross, &scalar::turning_points,
                        &scalar::weighted_dot3};
#if defined(SELSTREAM_HAVE_AVX2)
constexpr Table kAvx2{&avx2::sum, &avx2::central_sums, &avx2::lag1_cross, &avx2::turning_points,
                      &avx2::weighted_dot3};
#endif

bool cpu_has_avx2() {
#if defined(SELSTREAM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

const Table& table() {
#if defined(SELSTREAM_HAVE_AVX2)
    if (current().load(std::memory_order_relaxed) == Isa::avx2) return kAvx2;
#endif
    return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return current().load(); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw InputError("kernel variant not available on this CPU: " + std::string(isa_name(isa)));
    current().store(isa);
}

void reset_isa() { current().store(detect()); }

double sum(std::span<const double> x) { return table().sum(x); }
CentralSums central_sums(std::span<const double> x, double mean) { return table().central_sums(x, mean); }
double lag1_cross(std::span<const double> x, double mean) { return table().lag1_cross(x, mean); }
std::size_t turning_points(std::span<const double> x) { return table().turning_points(x); }
Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    return table().weighted_dot3(a, b, w);
}

}  // namespace selstream::kernels
