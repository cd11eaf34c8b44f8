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

#include "selstream/cli.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "selstream/config.hpp"
#include "selstream/csv_io.hpp"
#include "selstream/errors.hpp"
#include "selstream/generators.hpp"

namespace selstream {
namespace {

namespace fs = std::filesystem;

void add_stream_flags(CLI::App* cmd, StreamOverrides& o) {
    cmd->add_option("--complexity", o.complexity, "RandomTree minimum leaf depth (tree only)")->check(CLI::PositiveNumber);
    cmd->add_option("--drift-width", o.drift_width, "Gradual drift width in observations (0 = abrupt)");
    cmd->add_option("--noise", o.noise, "Class-noise fraction in [0, 1]")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--transition-noise", o.transition_noise, "Transition-pattern noise in [0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--segments", o.segments, "Number of concept segments")->check(CLI::PositiveNumber);
    cmd->add_option("--segment-length", o.segment_length, "Observations per segment")->check(CLI::PositiveNumber);
}

std::map<std::string, std::string> spec_map(const StreamSpec& s, const std::string& dataset) {
    std::map<std::string, std::string> m;
    m["dataset"] = dataset;
    m["stream.generator"] = s.generator;
    for (const auto& [k, v] : s.generator_params) m["stream." + k] = v;
    m["stream.concepts"] = std::to_string(s.concept_count);
    m["stream.segments"] = std::to_string(s.segment_count());
    m["stream.segment_length"] = std::to_string(s.segment_length);
    m["stream.drift_width"] = std::to_string(s.drift_width);
    m["stream.noise"] = format_double(s.class_noise);
    m["stream.transition_noise"] = format_double(s.transition_noise);
    m["stream.pattern_decay"] = format_double(s.pattern_decay);
    m["stream.forward_connections"] = std::to_string(s.forward_connections);
    m["stream.seed"] = std::to_string(s.seed);
    return m;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

SelectParams resolve_params(const std::string& config_path, const std::vector<std::string>& assignments) {
    SelectParams p;
    if (!config_path.empty())
        for (const auto& [k, v] : read_config_file(config_path)) set_param(p, k, v);
    for (const auto& a : assignments) apply_assignment(p, a);
    return p;
}

int cmd_generate(const std::string& dataset, std::uint64_t seed, const std::string& out_path, const StreamOverrides& o,
                 std::ostream& out) {
    const StreamSpec spec = make_spec(dataset, seed, o);
    const Stream stream = generate_stream(spec);
    write_csv_stream(stream, out_path);

    nlohmann::ordered_json manifest;
    for (const auto& [k, v] : spec_map(spec, dataset)) manifest[k] = v;
    manifest["length"] = stream.size();
    manifest["features"] = stream.feature_count;
    manifest["classes"] = stream.class_count;
    write_text(out_path + ".json", manifest.dump(2) + "\n");

    out << "dataset=" << dataset << " length=" << stream.size() << " features=" << stream.feature_count
        << " concepts=" << stream.distinct_concepts() << " segments=" << stream.segments.size() << " seed=" << seed
        << "\n";
    return 0;
}

int cmd_run(const std::string& input, const std::string& system, std::uint64_t seed, const std::string& out_path,
            const std::string& trace_path, const SelectParams& params, bool no_timing, std::ostream& out) {
    const SystemKind kind = parse_system(system);
    const Stream stream = load_csv_stream(input);
    RunOptions o;
    o.params = params;
    o.seed = seed;
    o.no_timing = no_timing;
    o.dataset = fs::path(input).stem().string();
    o.record_extras = !trace_path.empty();
    RunResult r = prequential_run(kind, stream, o);
    r.config["input"] = input;
    const std::string json = result_json(r);
    if (out_path.empty()) out << json;
    else write_text(out_path, json);
    if (!trace_path.empty()) {
        std::ofstream t(trace_path, std::ios::binary);
        if (!t) throw InputError("cannot write '" + trace_path + "'");
        write_trace_csv(r, t);
    }
    return 0;
}

int cmd_sweep(SweepOptions so, std::ostream& out, std::ostream& err) {
    if (so.out_dir.empty()) throw UsageError("sweep needs --out DIR");
    const SweepOutcome outcome = run_sweep(so);
    for (const auto& f : outcome.failures) err << "failed: " << f << "\n";
    out << "runs=" << outcome.results.size() << " failures=" << outcome.failures.size() << " out=" << so.out_dir << "\n";
    return 0;
}

}  // namespace

StreamSpec make_spec(const std::string& dataset, std::uint64_t seed, const StreamOverrides& o) {
    StreamSpec spec;
    try {
        spec = dataset_preset(dataset);
    } catch (const InvalidSpecError& e) {
        throw UsageError(e.what());
    }
    spec.seed = seed;
    if (o.complexity) {
        if (dataset != "tree") throw UsageError("--complexity applies only to --dataset tree");
        spec.generator_params["complexity"] = std::to_string(*o.complexity);
    }
    if (o.drift_width) spec.drift_width = *o.drift_width;
    if (o.noise) spec.class_noise = *o.noise;
    if (o.transition_noise) spec.transition_noise = *o.transition_noise;
    if (o.segments) spec.segments = *o.segments;
    if (o.segment_length) spec.segment_length = *o.segment_length;
    if (spec.drift_width >= spec.segment_length) throw UsageError("--drift-width must be smaller than the segment length");
    return spec;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    auto num = [&](const std::string& s) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw UsageError("bad seed range '" + text + "' (expected A..B)");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto v = num(text);
        return {v, v};
    }
    const auto a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
    if (b < a) throw UsageError("seed range '" + text + "' is empty");
    return {a, b};
}

SweepOutcome run_sweep(const SweepOptions& so) {
    std::vector<SystemKind> kinds;
    for (const auto& s : so.systems) kinds.push_back(parse_system(s));
    if (kinds.empty()) throw UsageError("no systems given");
    make_spec(so.dataset, so.first_seed, so.overrides);  // validate before spawning work

    const std::size_t seeds = static_cast<std::size_t>(so.last_seed - so.first_seed + 1);
    std::vector<std::vector<std::optional<RunResult>>> results(seeds, std::vector<std::optional<RunResult>>(kinds.size()));
    std::vector<std::vector<std::string>> errors(seeds, std::vector<std::string>(kinds.size()));

    if (!so.out_dir.empty()) fs::create_directories(fs::path(so.out_dir) / "runs");

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds; i = next++) {
            const std::uint64_t seed = so.first_seed + i;
            std::optional<Stream> stream;
            std::string gen_error;
            try {
                stream = generate_stream(make_spec(so.dataset, seed, so.overrides));
            } catch (const std::exception& e) {
                gen_error = std::string("generation: ") + e.what();
            }
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                if (!stream) {
                    errors[i][k] = gen_error;
                    continue;
                }
                try {
                    RunOptions o;
                    o.params = so.params;
                    o.seed = seed;
                    o.dataset = so.dataset;
                    o.no_timing = so.no_timing;
                    RunResult r = prequential_run(kinds[k], *stream, o);
                    for (const auto& [key, v] : spec_map(make_spec(so.dataset, seed, so.overrides), so.dataset))
                        r.config[key] = v;
                    if (!so.out_dir.empty()) {
                        const auto name = so.dataset + "_seed" + std::to_string(seed) + "_" + r.system + ".json";
                        write_text(fs::path(so.out_dir) / "runs" / name, result_json(r));
                    }
                    // Traces are large and not needed past this point.
                    r.extras.reset();
                    results[i][k] = std::move(r);
                } catch (const std::exception& e) {
                    errors[i][k] = e.what();
                }
            }
        }
    };
    const unsigned jobs = std::max(1u, so.jobs);
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < std::min<std::size_t>(jobs, seeds); ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepOutcome outcome;
    for (std::size_t i = 0; i < seeds; ++i)
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            if (results[i][k]) outcome.results.push_back(std::move(*results[i][k]));
            else outcome.failures.push_back("seed " + std::to_string(so.first_seed + i) + " system " +
                                            system_name(kinds[k]) + ": " + errors[i][k]);
        }
    if (!outcome.results.empty()) outcome.rows = aggregate(outcome.results);

    if (!so.out_dir.empty()) {
        auto cfg = param_map(so.params);
        for (const auto& [k, v] : spec_map(make_spec(so.dataset, so.first_seed, so.overrides), so.dataset)) cfg[k] = v;
        cfg.erase("stream.seed");
        cfg["seeds"] = std::to_string(so.first_seed) + ".." + std::to_string(so.last_seed);
        std::string systems;
        for (const auto& s : so.systems) systems += (systems.empty() ? "" : ",") + s;
        cfg["systems"] = systems;

        std::ostringstream csv;
        write_summary_csv(outcome.rows, csv);
        write_text(fs::path(so.out_dir) / "summary.csv", csv.str());
        std::string json = summary_json(outcome.rows, cfg);
        if (!outcome.failures.empty()) {
            auto j = nlohmann::ordered_json::parse(json);
            j["failures"] = outcome.failures;
            json = j.dump(2) + "\n";
        }
        write_text(fs::path(so.out_dir) / "summary.json", json);
    }
    return outcome;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"selstream: adaptive classification of streams with recurring concepts"};
    app.name("selstream");
    app.require_subcommand(1);

    std::string dataset, out_path, input, system = "select", trace, config, seeds = "1", systems = "select";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool no_timing = false;
    std::vector<std::string> params;
    StreamOverrides gen_o, sweep_o;

    auto* gen = app.add_subcommand("generate", "Write a synthetic stream CSV");
    gen->add_option("--dataset", dataset, "stagger, tree or wind")->required();
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--out", out_path, "Output CSV path")->required();
    add_stream_flags(gen, gen_o);

    auto* run = app.add_subcommand("run", "Run one system over a stream CSV");
    run->add_option("--input", input, "Stream CSV")->required();
    run->add_option("--system", system, "select, sparse, lb, ub, s_p, s_map or s_m");
    run->add_option("--seed", seed, "Seed recorded with the result");
    run->add_option("--out", out_path, "Result JSON path (stdout if omitted)");
    run->add_option("--param", params, "Parameter override key=value (repeatable)");
    run->add_option("--config", config, "File of key=value parameter lines");
    run->add_option("--trace", trace, "Per-step trace CSV path");
    run->add_flag("--no-timing", no_timing, "Write runtime_s = 0");

    auto* sweep = app.add_subcommand("sweep", "Run systems over regenerated datasets for a seed range");
    sweep->add_option("--seeds", seeds, "Seed range A..B");
    sweep->add_option("--systems", systems, "Comma-separated systems");
    sweep->add_option("--dataset", dataset, "stagger, tree or wind")->required();
    sweep->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "Output directory")->required();
    sweep->add_option("--param", params, "Parameter override key=value (repeatable)");
    sweep->add_option("--config", config, "File of key=value parameter lines");
    sweep->add_flag("--no-timing", no_timing, "Write runtime_s = 0 in per-run files");
    add_stream_flags(sweep, sweep_o);

    std::vector<std::string> argv_store{"selstream"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << "\n";
            const CLI::App* sub = nullptr;
            for (const auto* s : app.get_subcommands()) sub = s;
            err << (sub ? sub->help() : app.help());
            return 2;
        }

        if (gen->parsed()) return cmd_generate(dataset, seed, out_path, gen_o, out);
        if (run->parsed()) return cmd_run(input, system, seed, out_path, trace, resolve_params(config, params), no_timing, out);
        if (sweep->parsed()) {
            SweepOptions so;
            std::tie(so.first_seed, so.last_seed) = parse_seed_range(seeds);
            so.systems.clear();
            std::stringstream ss(systems);
            for (std::string s; std::getline(ss, s, ',');)
                if (!s.empty()) so.systems.push_back(s);
            so.dataset = dataset;
            so.overrides = sweep_o;
            so.params = resolve_params(config, params);
            so.jobs = jobs;
            so.no_timing = no_timing;
            so.out_dir = out_path;
            return cmd_sweep(std::move(so), out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        const CLI::App* sub = nullptr;
        for (const auto* s : app.get_subcommands()) sub = s;
        err << (sub ? sub->help() : app.help());
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace selstream
