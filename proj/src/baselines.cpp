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

#include "selstream/baselines.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <sstream>

#include "selstream/config.hpp"
#include "selstream/csv_io.hpp"
#include "selstream/errors.hpp"
#include "selstream/hoeffding_tree.hpp"

namespace selstream {
namespace {

using Clock = std::chrono::steady_clock;

RunResult start_result(SystemKind kind, const Stream& stream, const RunOptions& o, const SelectParams& params) {
    RunResult r;
    r.seed = o.seed;
    r.system = system_name(kind);
    r.dataset = o.dataset;
    r.config = param_map(params);
    r.config["system"] = r.system;
    r.config["ub_delay"] = std::to_string(o.ub_delay);
    r.y.reserve(stream.size());
    r.prediction.reserve(stream.size());
    r.active.reserve(stream.size());
    r.concept_id.reserve(stream.size());
    return r;
}

void finish(RunResult& r, const RunOptions& o, Clock::time_point t0) {
    r.summarize();
    r.runtime_s = o.no_timing ? 0.0 : std::chrono::duration<double>(Clock::now() - t0).count();
}

void record(RunResult& r, const Observation& obs, int prediction, int active) {
    r.y.push_back(obs.y);
    r.prediction.push_back(prediction);
    r.active.push_back(active);
    r.concept_id.push_back(obs.concept_id);
}

std::string format_posteriors(const std::vector<std::pair<int, double>>& post) {
    std::string s;
    for (const auto& [id, p] : post) {
        if (!s.empty()) s += ';';
        s += (id == Engine::kBackgroundId ? std::string("B") : std::to_string(id)) + ':' + format_double(p);
    }
    return s;
}

}  // namespace

SystemKind parse_system(const std::string& name) {
    static const std::map<std::string, SystemKind> m = {
        {"select", SystemKind::select}, {"sparse", SystemKind::sparse}, {"lb", SystemKind::lb},   {"ub", SystemKind::ub},
        {"s_p", SystemKind::s_p},       {"s_map", SystemKind::s_map},   {"s_m", SystemKind::s_m},
    };
    const auto it = m.find(name);
    if (it == m.end()) throw UsageError("unknown system '" + name + "' (expected select, sparse, lb, ub, s_p, s_map, s_m)");
    return it->second;
}

std::string system_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::select: return "select";
        case SystemKind::sparse: return "sparse";
        case SystemKind::lb: return "lb";
        case SystemKind::ub: return "ub";
        case SystemKind::s_p: return "s_p";
        case SystemKind::s_map: return "s_map";
        case SystemKind::s_m: return "s_m";
    }
    return "?";
}

std::vector<std::string> system_names() { return {"select", "sparse", "lb", "ub", "s_p", "s_map", "s_m"}; }

SelectParams variant_params(SystemKind kind, SelectParams p) {
    if (kind == SystemKind::s_p) p.uniform_prior = true;
    if (kind == SystemKind::s_map) p.map_selection = true;
    if (kind == SystemKind::s_m) p.merging = false;
    return p;
}

RunResult lower_bound_run(const Stream& stream, const RunOptions& o) {
    const auto t0 = Clock::now();
    RunResult r = start_result(SystemKind::lb, stream, o, o.params);
    HoeffdingTree tree(stream.feature_count, stream.class_count, o.params.tree);
    for (const auto& obs : stream.observations) {
        record(r, obs, tree.predict(obs.x), 0);
        tree.learn_one(obs.x, obs.y);
    }
    r.repo_size = 1;
    finish(r, o, t0);
    return r;
}

RunResult upper_bound_run(const Stream& stream, const RunOptions& o) {
    for (const auto& obs : stream.observations)
        if (!obs.concept_id) throw InputError("upper bound needs the 'concept' column (ground-truth concept ids)");
    const auto t0 = Clock::now();
    RunResult r = start_result(SystemKind::ub, stream, o, o.params);
    std::map<int, HoeffdingTree> trees;
    auto tree_for = [&](int c) -> HoeffdingTree& {
        auto it = trees.find(c);
        if (it == trees.end()) it = trees.emplace(c, HoeffdingTree(stream.feature_count, stream.class_count, o.params.tree)).first;
        return it->second;
    };

    std::deque<std::pair<std::size_t, int>> pending;  // (switch time, concept)
    int current = stream.observations.empty() ? 0 : *stream.observations.front().concept_id;
    for (std::size_t t = 0; t < stream.size(); ++t) {
        const auto& obs = stream.observations[t];
        if (t > 0 && *obs.concept_id != *stream.observations[t - 1].concept_id)
            pending.emplace_back(t + o.ub_delay, *obs.concept_id);
        while (!pending.empty() && pending.front().first <= t) {
            current = pending.front().second;
            pending.pop_front();
        }
        HoeffdingTree& tree = tree_for(current);
        record(r, obs, tree.predict(obs.x), current);
        tree.learn_one(obs.x, obs.y);
    }
    r.repo_size = trees.size();
    finish(r, o, t0);
    return r;
}

RunResult engine_run(SystemKind kind, const Stream& stream, const RunOptions& o) {
    if (kind == SystemKind::lb || kind == SystemKind::ub) throw InputError("not an engine system");
    const auto t0 = Clock::now();
    const EngineMode mode = kind == SystemKind::sparse ? EngineMode::sparse : EngineMode::select;
    const SelectParams params = variant_params(kind, o.params);
    RunResult r = start_result(kind, stream, o, params);
    Engine engine(stream.feature_count, stream.class_count, params, mode);
    if (o.record_extras) r.extras.emplace();
    for (std::size_t t = 0; t < stream.size(); ++t) {
        const auto& obs = stream.observations[t];
        StepResult s;
        try {
            s = engine.step(obs);
        } catch (const Error& e) {
            throw InputError("t=" + std::to_string(t) + ": " + e.what());
        }
        record(r, obs, s.prediction, s.active_state);
        if (r.extras) {
            r.extras->posteriors.push_back(format_posteriors(engine.posteriors()));
            r.extras->drift.push_back(s.drift);
            r.extras->transition.push_back(s.transition);
        }
    }
    r.repo_size = engine.repository_size();
    finish(r, o, t0);
    return r;
}

RunResult prequential_run(SystemKind kind, const Stream& stream, const RunOptions& o) {
    switch (kind) {
        case SystemKind::lb: return lower_bound_run(stream, o);
        case SystemKind::ub: return upper_bound_run(stream, o);
        default: return engine_run(kind, stream, o);
    }
}

}  // namespace selstream
