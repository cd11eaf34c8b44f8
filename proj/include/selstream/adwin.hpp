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

#include <cstddef>
#include <vector>

namespace selstream {

/// eps_cut = sqrt(ln(4 / delta_prime) / (2 m)).
double adwin_cut_threshold(double m, double delta_prime);

/// Adaptive window over a real-valued sequence, stored as an exponential
/// histogram (at most `arity` buckets per size before the oldest two merge).
/// Every insertion tests every bucket boundary as a cut; while some cut shows
/// |mu_old - mu_new| > eps_cut the oldest bucket is dropped.
class Adwin {
  public:
    struct Result {
        bool changed = false;
        std::size_t dropped = 0;
    };

    explicit Adwin(double delta = 0.05, int arity = 5);

    /// Throws InputError for non-finite values.
    Result add(double value);
    void reset();

    std::size_t size() const { return count_; }
    double sum() const { return sum_; }
    double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
    std::size_t bucket_count() const { return buckets_.size(); }
    double delta() const { return delta_; }

  private:
    struct Bucket {
        std::size_t count;
        double sum;
    };

    void compress();
    bool find_cut() const;

    double delta_;
    int arity_;
    std::vector<Bucket> buckets_;  // oldest first; counts non-increasing
    std::size_t count_ = 0;
    double sum_ = 0.0;
};

}  // namespace selstream
