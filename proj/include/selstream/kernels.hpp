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

// Data-parallel inner loops used by fingerprinting and similarity. Each
// kernel has a scalar reference implementation and, on x86-64 builds, an
// AVX2/FMA variant. The variant is chosen once at runtime from CPUID and can
// be pinned with force_isa() (tests use this to compare the two paths).

#include <cstddef>
#include <span>
#include <string_view>

namespace selstream::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Pin the implementation. Throws InputError if `isa` is not available.
void force_isa(Isa isa);
/// Return to the CPUID-selected implementation.
void reset_isa();

/// Un-normalised centred power sums: sum (x-m)^2, (x-m)^3, (x-m)^4.
struct CentralSums {
    double s2 = 0.0;
    double s3 = 0.0;
    double s4 = 0.0;
};

/// Sums of a weighted pair, as needed for a weighted cosine:
/// sum (w a)(w b), sum (w a)^2, sum (w b)^2.
struct Dot3 {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
};

double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double mean);
/// sum_{i<n-1} (x_i - m)(x_{i+1} - m)
double lag1_cross(std::span<const double> x, double mean);
/// Number of interior points that are strict local maxima or minima.
std::size_t turning_points(std::span<const double> x);
/// Requires a, b and w of equal length.
Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w);

namespace scalar {
double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double mean);
double lag1_cross(std::span<const double> x, double mean);
std::size_t turning_points(std::span<const double> x);
Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w);
}  // namespace scalar

#if defined(SELSTREAM_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double mean);
double lag1_cross(std::span<const double> x, double mean);
std::size_t turning_points(std::span<const double> x);
Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w);
}  // namespace avx2
#endif

}  // namespace selstream::kernels
