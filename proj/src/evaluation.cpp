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

#include "selstream/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <limits>
#include <tuple>

#include <json.hpp>

#include "selstream/errors.hpp"

namespace selstream {
namespace {

void check_pair(std::size_t a, std::size_t b) {
    if (a == 0) throw InputError("empty trace");
    if (a != b) throw InputError("trace columns differ in length");
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

double accuracy(std::span<const int> y, std::span<const int> yhat) {
    check_pair(y.size(), yhat.size());
    std::size_t hit = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hit += y[i] == yhat[i];
    return static_cast<double>(hit) / static_cast<double>(y.size());
}

double kappa(std::span<const int> y, std::span<const int> yhat) {
    check_pair(y.size(), yhat.size());
    const double n = static_cast<double>(y.size());
    std::map<int, std::pair<double, double>> freq;  // label -> (count in y, count in yhat)
    for (int v : y) freq[v].first += 1.0;
    for (int v : yhat) freq[v].second += 1.0;
    double pc = 0.0;
    for (const auto& [label, c] : freq) pc += (c.first / n) * (c.second / n);
    const double p = accuracy(y, yhat);
    // Both marginals on one label: agreement is then total, so kappa is 1.
    if (pc >= 1.0) return p == 1.0 ? 1.0 : 0.0;
    return (p - pc) / (1.0 - pc);
}

double c_f1(std::span<const int> states, std::span<const int> concepts) {
    check_pair(states.size(), concepts.size());
    std::map<int, double> state_n, concept_n;
    std::map<std::pair<int, int>, double> overlap;
    for (std::size_t i = 0; i < states.size(); ++i) {
        state_n[states[i]] += 1.0;
        concept_n[concepts[i]] += 1.0;
        overlap[{concepts[i], states[i]}] += 1.0;
    }
    double total = 0.0;
    for (const auto& [c, nc] : concept_n) {
        double best = 0.0;
        for (auto it = overlap.lower_bound({c, std::numeric_limits<int>::min()}); it != overlap.end() && it->first.first == c;
             ++it) {
            const double inter = it->second;
            const double r = inter / nc;
            const double p = inter / state_n[it->first.second];
            const double f1 = r + p > 0.0 ? 2.0 * r * p / (r + p) : 0.0;
            best = std::max(best, f1);
        }
        total += best;
    }
    return total / static_cast<double>(concept_n.size());
}

std::vector<double> rolling_accuracy(std::span<const int> y, std::span<const int> yhat, std::size_t window) {
    check_pair(y.size(), yhat.size());
    if (window == 0) throw InputError("rolling window must be > 0");
    std::vector<double> out(y.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        hits += y[i] == yhat[i];
        if (i >= window) hits -= y[i - window] == yhat[i - window];
        out[i] = static_cast<double>(hits) / static_cast<double>(std::min(i + 1, window));
    }
    return out;
}

std::size_t count_switches(std::span<const int> states) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < states.size(); ++i) n += states[i] != states[i - 1];
    return n;
}

void RunResult::summarize() {
    accuracy = selstream::accuracy(y, prediction);
    kappa = selstream::kappa(y, prediction);
    transitions = count_switches(active);
    c_f1.reset();
    if (!concept_id.empty() && std::all_of(concept_id.begin(), concept_id.end(), [](const auto& c) { return c.has_value(); })) {
        std::vector<int> c(concept_id.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = *concept_id[i];
        c_f1 = selstream::c_f1(active, c);
    }
}

std::string result_json(const RunResult& r) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["system"] = r.system;
    j["dataset"] = r.dataset;
    j["kappa"] = r.kappa;
    j["c_f1"] = r.c_f1 ? nlohmann::ordered_json(*r.c_f1) : nlohmann::ordered_json(nullptr);
    j["accuracy"] = r.accuracy;
    j["transitions"] = r.transitions;
    j["repo_size"] = r.repo_size;
    j["runtime_s"] = r.runtime_s;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    return j.dump(2) + "\n";
}

void write_trace_csv(const RunResult& r, std::ostream& out) {
    out << "t,y,prediction,active_state,concept,drift,transition,posteriors\n";
    const bool extra = r.extras.has_value();
    for (std::size_t t = 0; t < r.y.size(); ++t) {
        out << t << ',' << r.y[t] << ',' << r.prediction[t] << ',' << r.active[t] << ',';
        if (t < r.concept_id.size() && r.concept_id[t]) out << *r.concept_id[t];
        out << ',';
        if (extra) out << int(r.extras->drift[t]) << ',' << int(r.extras->transition[t]) << ',' << r.extras->posteriors[t];
        else out << "0," << (t > 0 && r.active[t] != r.active[t - 1] ? 1 : 0) << ',';
        out << '\n';
    }
}

AggregateRow summarize_values(std::span<const double> values) {
    if (values.empty()) throw InputError("nothing to aggregate");
    AggregateRow row;
    row.n = values.size();
    double s = 0.0;
    for (double v : values) s += v;
    row.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - row.mean) * (v - row.mean);
        row.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return row;
}

std::vector<AggregateRow> aggregate(const std::vector<RunResult>& results) {
    if (results.empty()) throw InputError("nothing to aggregate");
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
    for (const auto& r : results) {
        auto add = [&](const char* metric, double v) { groups[{r.system, r.dataset, metric}].push_back(v); };
        add("kappa", r.kappa);
        if (r.c_f1) add("c_f1", *r.c_f1);
        add("accuracy", r.accuracy);
        add("transitions", static_cast<double>(r.transitions));
        add("repo_size", static_cast<double>(r.repo_size));
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, vals] : groups) {
        AggregateRow row = summarize_values(vals);
        std::tie(row.system, row.dataset, row.metric) = key;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
    out << "system,dataset,metric,n,mean,std\n";
    for (const auto& r : rows)
        out << r.system << ',' << r.dataset << ',' << r.metric << ',' << r.n << ',' << fixed(r.mean, 6) << ','
            << fixed(r.std, 6) << '\n';
}

std::string summary_json(const std::vector<AggregateRow>& rows, const std::map<std::string, std::string>& config) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        j["rows"].push_back({{"system", r.system}, {"dataset", r.dataset}, {"metric", r.metric}, {"n", r.n},
                             {"mean", r.mean}, {"std", r.std}});
    }
    return j.dump(2) + "\n";
}

}  // namespace selstream
