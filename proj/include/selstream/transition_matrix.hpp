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

#include <array>
#include <map>
#include <vector>

namespace selstream {

/// Paired transition-count tables: index 0 counts steps taken without a
/// recent drift alert, index 1 steps within the alert window.
class TransitionMatrices {
  public:
    void add(int d, int from, int to, double amount = 1.0);
    void set(int d, int from, int to, double value);
    double get(int d, int from, int to) const;
    double row_total(int d, int from) const;
    /// Folds the loser's rows and columns into the keeper's in both tables.
    void merge(int keeper, int loser);
    double total_mass() const;
    /// Ids appearing as a row or column in either table.
    std::vector<int> ids() const;

    /// max over h = 1..steps of multiplier^(h-1) * (P^h)[from][j] for each
    /// j in `targets`, where P is the row-normalised table d (all-zero rows
    /// stay zero).
    std::vector<double> multihop(int d, int from, const std::vector<int>& targets, int steps, double multiplier) const;

  private:
    using Table = std::map<int, std::map<int, double>>;
    std::array<Table, 2> tm_;
};

struct PriorParams {
    /// Lower bound on each state's effective transition probability; 0
    /// disables the floor.
    double min_prior = 0.7;
    double multihop_multiplier = 0.7;
    int multihop_steps = 3;
    bool uniform = false;
};

/// Priors over `repo` (normalised to sum 1) for the next active state given
/// the active state and drift flag d. Falls back to uniform when every
/// effective value is zero. Throws InternalError if `active` is not in repo.
std::vector<double> compute_priors(const TransitionMatrices& tm, int d, int active, const std::vector<int>& repo,
                                   const PriorParams& params);

}  // namespace selstream
