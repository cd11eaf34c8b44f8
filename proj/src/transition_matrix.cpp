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

#include "selstream/transition_matrix.hpp"

#include <algorithm>
#include <set>

#include "selstream/errors.hpp"

namespace selstream {

void TransitionMatrices::add(int d, int from, int to, double amount) { tm_.at(static_cast<std::size_t>(d))[from][to] += amount; }

void TransitionMatrices::set(int d, int from, int to, double value) { tm_.at(static_cast<std::size_t>(d))[from][to] = value; }

double TransitionMatrices::get(int d, int from, int to) const {
    const auto& t = tm_.at(static_cast<std::size_t>(d));
    const auto r = t.find(from);
    if (r == t.end()) return 0.0;
    const auto c = r->second.find(to);
    return c == r->second.end() ? 0.0 : c->second;
}

double TransitionMatrices::row_total(int d, int from) const {
    const auto& t = tm_.at(static_cast<std::size_t>(d));
    const auto r = t.find(from);
    if (r == t.end()) return 0.0;
    double s = 0.0;
    for (const auto& [to, v] : r->second) s += v;
    return s;
}

void TransitionMatrices::merge(int keeper, int loser) {
    if (keeper == loser) return;
    for (auto& t : tm_) {
        if (auto r = t.find(loser); r != t.end()) {
            auto row = std::move(r->second);
            t.erase(r);
            for (const auto& [to, v] : row) t[keeper][to == loser ? keeper : to] += v;
        }
        for (auto& [from, row] : t) {
            if (auto c = row.find(loser); c != row.end()) {
                const double v = c->second;
                row.erase(c);
                row[keeper] += v;
            }
        }
    }
}

double TransitionMatrices::total_mass() const {
    double s = 0.0;
    for (const auto& t : tm_)
        for (const auto& [from, row] : t)
            for (const auto& [to, v] : row) s += v;
    return s;
}

std::vector<int> TransitionMatrices::ids() const {
    std::set<int> s;
    for (const auto& t : tm_)
        for (const auto& [from, row] : t) {
            s.insert(from);
            for (const auto& [to, v] : row) s.insert(to);
        }
    return {s.begin(), s.end()};
}

std::vector<double> TransitionMatrices::multihop(int d, int from, const std::vector<int>& targets, int steps,
                                                 double multiplier) const {
    const auto& t = tm_.at(static_cast<std::size_t>(d));
    std::map<int, double> v{{from, 1.0}};
    std::vector<double> best(targets.size(), 0.0);
    double penalty = 1.0;
    for (int h = 1; h <= steps; ++h) {
        std::map<int, double> next;
        for (const auto& [i, p] : v) {
            const auto r = t.find(i);
            if (r == t.end()) continue;
            const double total = row_total(d, i);
            if (total <= 0.0) continue;
            for (const auto& [j, c] : r->second) next[j] += p * c / total;
        }
        v = std::move(next);
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto it = v.find(targets[k]);
            if (it != v.end()) best[k] = std::max(best[k], penalty * it->second);
        }
        penalty *= multiplier;
    }
    return best;
}

std::vector<double> compute_priors(const TransitionMatrices& tm, int d, int active, const std::vector<int>& repo,
                                   const PriorParams& params) {
    if (std::find(repo.begin(), repo.end(), active) == repo.end())
        throw InternalError("active state " + std::to_string(active) + " is not in the repository");
    std::vector<double> p;
    if (params.uniform) {
        p.assign(repo.size(), 1.0);
    } else {
        // The floor is a minimum transition probability, so a long-lived
        // state cannot starve every alternative of prior mass.
        p = tm.multihop(d, active, repo, params.multihop_steps, params.multihop_multiplier);
        if (params.min_prior > 0.0)
            for (double& v : p) v = std::max(v, params.min_prior);
    }
    double s = 0.0;
    for (double v : p) s += v;
    if (s <= 0.0) {
        p.assign(repo.size(), 1.0);
        s = static_cast<double>(repo.size());
    }
    for (double& v : p) v /= s;
    return p;
}

}  // namespace selstream
