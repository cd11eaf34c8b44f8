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

#include "selstream/adwin.hpp"

#include <cmath>

#include "selstream/errors.hpp"

namespace selstream {

double adwin_cut_threshold(double m, double delta_prime) { return std::sqrt(std::log(4.0 / delta_prime) / (2.0 * m)); }

Adwin::Adwin(double delta, int arity) : delta_(delta), arity_(arity) {
    if (!(delta > 0.0 && delta < 1.0 + 1e-12)) throw InputError("ADWIN delta must be in (0, 1]");
    if (arity < 2) throw InputError("ADWIN arity must be >= 2");
}

void Adwin::reset() {
    buckets_.clear();
    count_ = 0;
    sum_ = 0.0;
}

void Adwin::compress() {
    // Runs of equal-sized buckets are contiguous; walking from the newest end
    // merges the two oldest of any run longer than arity, which may cascade.
    std::size_t end = buckets_.size();
    while (end > 0) {
        std::size_t begin = end;
        const std::size_t sz = buckets_[end - 1].count;
        while (begin > 0 && buckets_[begin - 1].count == sz) --begin;
        if (end - begin <= static_cast<std::size_t>(arity_)) {
            end = begin;
            continue;
        }
        buckets_[begin].count += buckets_[begin + 1].count;
        buckets_[begin].sum += buckets_[begin + 1].sum;
        buckets_.erase(buckets_.begin() + static_cast<std::ptrdiff_t>(begin) + 1);
        end = begin + 1;
    }
}

bool Adwin::find_cut() const {
    if (buckets_.size() < 2) return false;
    const double cuts = static_cast<double>(buckets_.size() - 1);
    const double delta_prime = delta_ / cuts;
    std::size_t n0 = 0;
    double s0 = 0.0;
    for (std::size_t i = 0; i + 1 < buckets_.size(); ++i) {
        n0 += buckets_[i].count;
        s0 += buckets_[i].sum;
        const std::size_t n1 = count_ - n0;
        const double mu0 = s0 / static_cast<double>(n0);
        const double mu1 = (sum_ - s0) / static_cast<double>(n1);
        const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
        if (std::abs(mu0 - mu1) > adwin_cut_threshold(m, delta_prime)) return true;
    }
    return false;
}

Adwin::Result Adwin::add(double value) {
    if (!std::isfinite(value)) throw InputError("ADWIN input must be finite");
    buckets_.push_back({1, value});
    ++count_;
    sum_ += value;
    compress();

    Result r;
    while (find_cut()) {
        const Bucket oldest = buckets_.front();
        buckets_.erase(buckets_.begin());
        count_ -= oldest.count;
        r.dropped += oldest.count;
        r.changed = true;
    }
    if (r.changed) {
        sum_ = 0.0;
        for (const auto& b : buckets_) sum_ += b.sum;
    }
    return r;
}

}  // namespace selstream
