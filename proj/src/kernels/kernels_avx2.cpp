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

// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include "selstream/kernels.hpp"

namespace selstream::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> x) {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += p[i];
    return s;
}

CentralSums central_sums(std::span<const double> x, double mean) {
    const double* p = x.data();
    const std::size_t n = x.size();
    const __m256d m = _mm256_set1_pd(mean);
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    __m256d a4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), m);
        const __m256d d2 = _mm256_mul_pd(d, d);
        a2 = _mm256_add_pd(a2, d2);
        a3 = _mm256_fmadd_pd(d2, d, a3);
        a4 = _mm256_fmadd_pd(d2, d2, a4);
    }
    CentralSums out{hsum(a2), hsum(a3), hsum(a4)};
    for (; i < n; ++i) {
        const double d = p[i] - mean;
        const double d2 = d * d;
        out.s2 += d2;
        out.s3 += d2 * d;
        out.s4 += d2 * d2;
    }
    return out;
}

double lag1_cross(std::span<const double> x, double mean) {
    const double* p = x.data();
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const std::size_t pairs = n - 1;
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= pairs; i += 4) {
        const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(p + i), m);
        const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(p + i + 1), m);
        acc = _mm256_fmadd_pd(a, b, acc);
    }
    double s = hsum(acc);
    for (; i < pairs; ++i) s += (p[i] - mean) * (p[i + 1] - mean);
    return s;
}

std::size_t turning_points(std::span<const double> x) {
    const double* p = x.data();
    const std::size_t n = x.size();
    if (n < 3) return 0;
    std::size_t count = 0;
    std::size_t i = 1;
    for (; i + 1 + 4 <= n; i += 4) {
        const __m256d l = _mm256_loadu_pd(p + i - 1);
        const __m256d c = _mm256_loadu_pd(p + i);
        const __m256d r = _mm256_loadu_pd(p + i + 1);
        const __m256d peak = _mm256_and_pd(_mm256_cmp_pd(c, l, _CMP_GT_OQ), _mm256_cmp_pd(c, r, _CMP_GT_OQ));
        const __m256d trough = _mm256_and_pd(_mm256_cmp_pd(c, l, _CMP_LT_OQ), _mm256_cmp_pd(c, r, _CMP_LT_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(_mm256_or_pd(peak, trough))));
    }
    for (; i + 1 < n; ++i) {
        const double l = p[i - 1], c = p[i], r = p[i + 1];
        if ((c > l && c > r) || (c < l && c < r)) ++count;
    }
    return count;
}

Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    const std::size_t n = a.size();
    __m256d ab = _mm256_setzero_pd();
    __m256d aa = _mm256_setzero_pd();
    __m256d bb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wv = _mm256_loadu_pd(w.data() + i);
        const __m256d wa = _mm256_mul_pd(wv, _mm256_loadu_pd(a.data() + i));
        const __m256d wb = _mm256_mul_pd(wv, _mm256_loadu_pd(b.data() + i));
        ab = _mm256_fmadd_pd(wa, wb, ab);
        aa = _mm256_fmadd_pd(wa, wa, aa);
        bb = _mm256_fmadd_pd(wb, wb, bb);
    }
    Dot3 out{hsum(ab), hsum(aa), hsum(bb)};
    for (; i < n; ++i) {
        const double wa = w[i] * a[i];
        const double wb = w[i] * b[i];
        out.ab += wa * wb;
        out.aa += wa * wa;
        out.bb += wb * wb;
    }
    return out;
}

}  // namespace selstream::kernels::avx2
