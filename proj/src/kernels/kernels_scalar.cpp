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

#include "selstream/kernels.hpp"

namespace selstream::kernels::scalar {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

CentralSums central_sums(std::span<const double> x, double mean) {
    CentralSums out;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        out.s2 += d2;
        out.s3 += d2 * d;
        out.s4 += d2 * d2;
    }
    return out;
}

double lag1_cross(std::span<const double> x, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += (x[i] - mean) * (x[i + 1] - mean);
    return s;
}

std::size_t turning_points(std::span<const double> x) {
    std::size_t n = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double l = x[i - 1], c = x[i], r = x[i + 1];
        if ((c > l && c > r) || (c < l && c < r)) ++n;
    }
    return n;
}

Dot3 weighted_dot3(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    Dot3 out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double wa = w[i] * a[i];
        const double wb = w[i] * b[i];
        out.ab += wa * wb;
        out.aa += wa * wa;
        out.bb += wb * wb;
    }
    return out;
}

}  // namespace selstream::kernels::scalar
