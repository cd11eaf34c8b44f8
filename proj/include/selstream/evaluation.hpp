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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace selstream {

/// Chance-corrected accuracy with p_c = sum_c freq(yhat = c) freq(y = c);
/// 0 when p_c = 1. Throws InputError on empty or unequal inputs.
double kappa(std::span<const int> y, std::span<const int> yhat);

double accuracy(std::span<const int> y, std::span<const int> yhat);

/// Mean over concepts of the best F1 between that concept's timesteps and
/// any single state's timesteps. Throws InputError on empty or unequal
/// inputs.
double c_f1(std::span<const int> states, std::span<const int> concepts);

/// Accuracy over the trailing `window` steps (fewer at the start).
std::vector<double> rolling_accuracy(std::span<const int> y, std::span<const int> yhat, std::size_t window = 100);

/// Number of t > 0 with states[t] != states[t-1].
std::size_t count_switches(std::span<const int> states);

struct TraceExtras {
    std::vector<std::string> posteriors;  // "id:p;id:p"
    std::vector<char> drift;
    std::vector<char> transition;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::string system;
    std::string dataset;
    std::vector<int> y, prediction, active;
    std::vector<std::optional<int>> concept_id;
    std::optional<TraceExtras> extras;

    double accuracy = 0.0;
    double kappa = 0.0;
    std::optional<double> c_f1;
    std::size_t transitions = 0;
    std::size_t repo_size = 0;
    double runtime_s = 0.0;
    std::map<std::string, std::string> config;

    /// Recomputes the summary metrics from the per-step trace.
    void summarize();
};

/// `seed, system, dataset, kappa, c_f1, accuracy, transitions, repo_size,
/// runtime_s, config`.
std::string result_json(const RunResult& r);
void write_trace_csv(const RunResult& r, std::ostream& out);

struct AggregateRow {
    std::string system, dataset, metric;
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1); 0 for n = 1
};

/// Mean and sample std per (system, dataset, metric) over kappa, c_f1,
/// accuracy, transitions and repo_size. Runtime is left out so summaries are
/// reproducible. Rows are sorted by key.
std::vector<AggregateRow> aggregate(const std::vector<RunResult>& results);

/// Plain mean/std helper used by aggregate().
AggregateRow summarize_values(std::span<const double> values);

void write_summary_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
std::string summary_json(const std::vector<AggregateRow>& rows, const std::map<std::string, std::string>& config);

}  // namespace selstream
