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


// Brute-force metric oracles shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <set>
#include <vector>

namespace selstream::oracle {

/// Cohen's kappa from explicit per-label marginals.
inline double kappa(const std::vector<int>& y, const std::vector<int>& yhat) {
    std::set<int> labels(y.begin(), y.end());
    labels.insert(yhat.begin(), yhat.end());
    const double n = static_cast<double>(y.size());
    double agree = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) agree += y[i] == yhat[i];
    double pc = 0.0;
    for (int l : labels) {
        const double a = static_cast<double>(std::count(y.begin(), y.end(), l));
        const double b = static_cast<double>(std::count(yhat.begin(), yhat.end(), l));
        pc += (a / n) * (b / n);
    }
    const double p = agree / n;
    return pc == 1.0 ? (p == 1.0 ? 1.0 : 0.0) : (p - pc) / (1.0 - pc);
}

/// Mean over concepts of the best F1 between the concept's timestep set and
/// any single state's timestep set.
inline double c_f1(const std::vector<int>& states, const std::vector<int>& concepts) {
    std::map<int, std::set<std::size_t>> by_state, by_concept;
    for (std::size_t t = 0; t < states.size(); ++t) {
        by_state[states[t]].insert(t);
        by_concept[concepts[t]].insert(t);
    }
    double total = 0.0;
    for (const auto& [c, ct] : by_concept) {
        double best = 0.0;
        for (const auto& [s, st] : by_state) {
            std::vector<std::size_t> both;
            std::set_intersection(ct.begin(), ct.end(), st.begin(), st.end(), std::back_inserter(both));
            const double f1 = 2.0 * static_cast<double>(both.size()) / static_cast<double>(ct.size() + st.size());
            best = std::max(best, f1);
        }
        total += best;
    }
    return total / static_cast<double>(by_concept.size());
}

}  // namespace selstream::oracle
