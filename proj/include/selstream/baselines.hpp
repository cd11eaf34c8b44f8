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
#include <string>
#include <vector>

#include "selstream/engine.hpp"
#include "selstream/evaluation.hpp"
#include "selstream/stream.hpp"

namespace selstream {

enum class SystemKind { select, sparse, lb, ub, s_p, s_map, s_m };

/// Accepted names: select, sparse, lb, ub, s_p, s_map, s_m.
SystemKind parse_system(const std::string& name);
std::string system_name(SystemKind kind);
std::vector<std::string> system_names();

/// `params` with the variant's single component swapped.
SelectParams variant_params(SystemKind kind, SelectParams params);

struct RunOptions {
    SelectParams params;
    std::size_t ub_delay = 100;
    /// Keep posterior/drift/transition columns for a trace CSV.
    bool record_extras = false;
    /// Report runtime_s = 0 (byte-identical result files).
    bool no_timing = false;
    std::uint64_t seed = 0;
    std::string dataset;
};

/// Prequential test-then-train run of one system over `stream`.
RunResult prequential_run(SystemKind kind, const Stream& stream, const RunOptions& options);

/// One tree, no adaptation; state id is always 0.
RunResult lower_bound_run(const Stream& stream, const RunOptions& options);

/// One tree per ground-truth concept; after the concept id changes at t,
/// that concept's tree becomes active at t + delay. Throws InputError if any
/// observation lacks a concept id.
RunResult upper_bound_run(const Stream& stream, const RunOptions& options);

/// The select engine, its ablation variants and the sparse mode.
RunResult engine_run(SystemKind kind, const Stream& stream, const RunOptions& options);

}  // namespace selstream
