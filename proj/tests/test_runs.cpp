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


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "selstream/baselines.hpp"
#include "selstream/cli.hpp"
#include "selstream/csv_io.hpp"
#include "selstream/errors.hpp"
#include "selstream/generators.hpp"

using namespace selstream;
namespace fs = std::filesystem;

namespace {

Stream small_stagger(std::uint64_t seed, int segments = 4, std::size_t len = 1000) {
    StreamOverrides o;
    o.segments = segments;
    o.segment_length = len;
    return generate_stream(make_spec("stagger", seed, o));
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("selstream_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("upper bound switches exactly one delay after each drift") {
    const auto s = small_stagger(3, 6, 5000);
    const auto r = prequential_run(SystemKind::ub, s, RunOptions{});
    std::vector<std::size_t> drifts, switches;
    for (std::size_t t = 1; t < s.size(); ++t) {
        if (*s.observations[t].concept_id != *s.observations[t - 1].concept_id) drifts.push_back(t + 100);
        if (r.active[t] != r.active[t - 1]) switches.push_back(t);
    }
    CHECK(drifts == switches);
    CHECK(*r.c_f1 >= 0.95);
}

TEST_CASE("lower bound never switches and matches the upper bound without drift") {
    auto s = small_stagger(4, 4);
    const auto lb = prequential_run(SystemKind::lb, s, RunOptions{});
    CHECK(lb.transitions == 0);
    CHECK(lb.repo_size == 1);
    for (auto& o : s.observations) o.concept_id = 0;
    const auto ub = prequential_run(SystemKind::ub, s, RunOptions{});
    const auto lb2 = prequential_run(SystemKind::lb, s, RunOptions{});
    CHECK(ub.prediction == lb2.prediction);
    CHECK(ub.transitions == 0);
}

TEST_CASE("upper bound needs ground truth") {
    auto s = small_stagger(1, 2, 200);
    for (auto& o : s.observations) o.concept_id.reset();
    CHECK_THROWS_AS(prequential_run(SystemKind::ub, s, RunOptions{}), InputError);
}

TEST_CASE("lower bound trails the upper bound on conflicting concepts") {
    Stream s;
    s.feature_count = 3;
    for (int seg = 0; seg < 6; ++seg) {
        const int rule = seg % 2 ? 2 : 0;
        for (auto& o : stagger_sample({rule}, 2000, 10 + seg)) {
            o.t = s.observations.size();
            o.concept_id = rule;
            s.observations.push_back(o);
        }
    }
    const auto lb = prequential_run(SystemKind::lb, s, RunOptions{});
    const auto ub = prequential_run(SystemKind::ub, s, RunOptions{});
    CHECK(lb.kappa < ub.kappa);
}

TEST_CASE("system names round trip") {
    for (const auto& n : system_names()) CHECK(system_name(parse_system(n)) == n);
    CHECK_THROWS(parse_system("nope"));
}

TEST_CASE("cli generate writes the requested stream") {
    const auto dir = scratch("gen");
    std::string text;
    CHECK(cli({"generate", "--dataset", "stagger", "--seed", "1", "--segments", "2", "--segment-length", "10", "--out",
               (dir / "s.csv").string()},
              &text) == 0);
    const auto s = load_csv_stream((dir / "s.csv").string());
    CHECK(s.size() == 20);
    CHECK(s.feature_count == 3);
    CHECK(cli({"generate", "--dataset", "nope", "--out", (dir / "x.csv").string()}, &text) == 2);
    CHECK(text.find("stagger") != std::string::npos);
    CHECK(cli({"generate", "--dataset", "stagger", "--noise", "2", "--out", (dir / "x.csv").string()}) == 2);
}

TEST_CASE("cli run") {
    const auto dir = scratch("run");
    const auto csv = (dir / "s.csv").string();
    REQUIRE(cli({"generate", "--dataset", "stagger", "--seed", "2", "--segments", "3", "--segment-length", "600",
                 "--out", csv}) == 0);
    REQUIRE(cli({"run", "--input", csv, "--system", "lb", "--out", (dir / "lb.json").string()}) == 0);
    const auto lb = nlohmann::json::parse(slurp(dir / "lb.json"));
    CHECK(lb["transitions"] == 0);
    for (const char* key : {"seed", "system", "dataset", "kappa", "c_f1", "accuracy", "transitions", "repo_size",
                            "runtime_s"})
        CHECK(lb.contains(key));

    REQUIRE(cli({"run", "--input", csv, "--system", "select", "--no-timing", "--out", (dir / "a.json").string()}) == 0);
    REQUIRE(cli({"run", "--input", csv, "--system", "select", "--no-timing", "--param", "merge_correlation=0.95",
                 "--out", (dir / "b.json").string()}) == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

    std::string text;
    CHECK(cli({"run", "--input", csv, "--param", "bogus=1"}, &text) == 2);
    CHECK(text.find("merge_correlation") != std::string::npos);

    {
        std::ofstream f(dir / "plain.csv");
        f << "f0,f1,f2,y\n0,0,0,1\n1,1,1,0\n";
    }
    CHECK(cli({"run", "--input", (dir / "plain.csv").string(), "--system", "ub"}, &text) == 1);
    CHECK(text.find("concept") != std::string::npos);
    CHECK(cli({"run", "--input", (dir / "missing.csv").string()}) == 1);
}

TEST_CASE("cli sweep writes every run and a deterministic summary") {
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    const std::vector<std::string> common{"sweep", "--seeds", "1..2", "--systems", "select,lb,ub", "--dataset",
                                          "stagger", "--param", "window=100"};
    auto with = [&](const fs::path& dir, const std::string& jobs) {
        auto v = common;
        v.insert(v.end(), {"--jobs", jobs, "--out", dir.string()});
        return v;
    };
    // Shorter streams keep the unit test quick.
    auto shorten = [](std::vector<std::string> v) {
        v.insert(v.end(), {"--segments", "3", "--segment-length", "500"});
        return v;
    };
    REQUIRE(cli(shorten(with(a, "1"))) == 0);
    REQUIRE(cli(shorten(with(b, "3"))) == 0);
    std::size_t runs = 0;
    for (const auto& e : fs::directory_iterator(a / "runs")) runs += e.path().extension() == ".json";
    CHECK(runs == 6);
    CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
    CHECK(cli({"sweep", "--seeds", "3..1", "--dataset", "stagger", "--out", a.string()}) == 2);
}
