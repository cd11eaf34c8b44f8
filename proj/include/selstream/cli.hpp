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
#include <optional>
#include <string>
#include <vector>

#include "selstream/baselines.hpp"
#include "selstream/evaluation.hpp"
#include "selstream/stream.hpp"

namespace selstream {

struct StreamOverrides {
    std::optional<int> complexity;
    std::optional<std::size_t> drift_width;
    std::optional<double> noise;
    std::optional<double> transition_noise;
    std::optional<int> segments;
    std::optional<std::size_t> segment_length;
};

/// Preset for `dataset` with overrides applied. Throws UsageError for an
/// unknown dataset or a flag that does not apply to it.
StreamSpec make_spec(const std::string& dataset, std::uint64_t seed, const StreamOverrides& overrides);

struct SweepOptions {
    std::uint64_t first_seed = 1;
    std::uint64_t last_seed = 1;
    std::vector<std::string> systems{"select"};
    std::string dataset = "stagger";
    StreamOverrides overrides;
    SelectParams params;
    unsigned jobs = 1;
    bool no_timing = false;
    /// When non-empty, per-run JSONs and the summaries are written here.
    std::string out_dir;
};

struct SweepOutcome {
    std::vector<RunResult> results;  // seed-major, systems in the given order
    std::vector<std::string> failures;
    std::vector<AggregateRow> rows;
};

/// Parses "A..B" (or a single "A").
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text);

/// Regenerates the dataset per seed and runs every system on it. Jobs run
/// whole seeds; results are gathered in seed order so the output does not
/// depend on `jobs`. A failing (seed, system) pair is recorded and skipped.
SweepOutcome run_sweep(const SweepOptions& options);

/// Entry point shared by the executable and tests. args[0] is the
/// subcommand. Returns 0 on success, 2 on usage errors and 1 otherwise.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selstream
