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

#include "selstream/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>

#include "selstream/csv_io.hpp"
#include "selstream/errors.hpp"

namespace selstream {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
        throw UsageError("parameter " + key + ": '" + v + "' is not a number");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw UsageError("parameter " + key + ": '" + v + "' is not an integer");
    return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
    const long long n = to_int(key, v);
    if (n < 0) throw UsageError("parameter " + key + " must be >= 0");
    return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("parameter " + key + ": '" + v + "' is not a boolean");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Field {
    std::function<void(SelectParams&, const std::string&, const std::string&)> set;
    std::function<std::string(const SelectParams&)> get;
};

template <class Ref>
Field real_field(Ref ref) {
    return {[ref](SelectParams& p, const std::string& k, const std::string& v) { ref(p) = to_double(k, v); },
            [ref](const SelectParams& p) { return format_double(ref(p)); }};
}

template <class Ref>
Field size_field(Ref ref) {
    return {[ref](SelectParams& p, const std::string& k, const std::string& v) { ref(p) = to_size(k, v); },
            [ref](const SelectParams& p) { return std::to_string(ref(p)); }};
}

template <class Ref>
Field int_field(Ref ref) {
    return {[ref](SelectParams& p, const std::string& k, const std::string& v) {
                const long long n = to_int(k, v);
                if (n < 0 || n > 1000000000) throw UsageError("parameter " + k + " out of range");
                ref(p) = static_cast<int>(n);
            },
            [ref](const SelectParams& p) { return std::to_string(ref(p)); }};
}

template <class Ref>
Field bool_field(Ref ref) {
    return {[ref](SelectParams& p, const std::string& k, const std::string& v) { ref(p) = to_bool(k, v); },
            [ref](const SelectParams& p) { return bool_str(ref(p)); }};
}

#define SEL_REF(member) [](auto& p) -> auto& { return p.member; }

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = {
        {"hoeffding_risk", real_field(SEL_REF(hoeffding_risk))},
        {"min_state_likelihood", real_field(SEL_REF(min_state_likelihood))},
        {"b_prior_multiplier", real_field(SEL_REF(b_prior_multiplier))},
        {"min_prior", real_field(SEL_REF(min_prior))},
        {"multihop_multiplier", real_field(SEL_REF(multihop_multiplier))},
        {"multihop_steps", int_field(SEL_REF(multihop_steps))},
        {"prev_state_prior", real_field(SEL_REF(prev_state_prior))},
        {"merge_correlation", real_field(SEL_REF(merge_correlation))},
        {"state_grace", int_field(SEL_REF(state_grace))},
        {"window", size_field(SEL_REF(window))},
        {"buffer_ratio", real_field(SEL_REF(buffer_ratio))},
        {"drift_delta", real_field(SEL_REF(drift_delta))},
        {"state_estimator_risk", real_field(SEL_REF(state_estimator_risk))},
        {"fingerprint_period", size_field(SEL_REF(fingerprint_period))},
        {"min_window_ratio", real_field(SEL_REF(min_window_ratio))},
        {"sim_std_min", real_field(SEL_REF(sim_std_min))},
        {"sim_std_max", real_field(SEL_REF(sim_std_max))},
        {"merge_period", size_field(SEL_REF(merge_period))},
        {"merge_history", size_field(SEL_REF(merge_history))},
        {"merge_min_overlap", size_field(SEL_REF(merge_min_overlap))},
        {"merge_similarity_margin", real_field(SEL_REF(merge_similarity_margin))},
        {"similarity_history", size_field(SEL_REF(similarity_history))},
        {"uniform_prior", bool_field(SEL_REF(uniform_prior))},
        {"map_selection", bool_field(SEL_REF(map_selection))},
        {"merging", bool_field(SEL_REF(merging))},
        {"sparse_accept", real_field(SEL_REF(sparse_accept))},
        {"tree.grace_period", int_field(SEL_REF(tree.grace_period))},
        {"tree.split_confidence", real_field(SEL_REF(tree.split_confidence))},
        {"tree.tie_threshold", real_field(SEL_REF(tree.tie_threshold))},
        {"normalization",
         {[](SelectParams& p, const std::string& k, const std::string& v) {
              if (v == "none") p.normalization = Normalization::none;
              else if (v == "minmax") p.normalization = Normalization::minmax;
              else if (v == "zscore") p.normalization = Normalization::zscore;
              else throw UsageError("parameter " + k + " must be none, minmax or zscore");
          },
          [](const SelectParams& p) {
              switch (p.normalization) {
                  case Normalization::none: return std::string("none");
                  case Normalization::zscore: return std::string("zscore");
                  default: return std::string("minmax");
              }
          }}},
        {"tree.leaf_prediction",
         {[](SelectParams& p, const std::string& k, const std::string& v) {
              if (v == "mc") p.tree.leaf_prediction = LeafPrediction::majority;
              else if (v == "nb") p.tree.leaf_prediction = LeafPrediction::naive_bayes;
              else if (v == "nba") p.tree.leaf_prediction = LeafPrediction::naive_bayes_adaptive;
              else throw UsageError("parameter " + k + " must be mc, nb or nba");
          },
          [](const SelectParams& p) {
              switch (p.tree.leaf_prediction) {
                  case LeafPrediction::majority: return std::string("mc");
                  case LeafPrediction::naive_bayes: return std::string("nb");
                  default: return std::string("nba");
              }
          }}},
    };
    return f;
}

}  // namespace

std::vector<std::string> param_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, f] : fields()) keys.push_back(k);
    return keys;
}

void set_param(SelectParams& p, const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) {
        std::string list;
        for (const auto& k : param_keys()) list += (list.empty() ? "" : ", ") + k;
        throw UsageError("unknown parameter '" + key + "'; valid keys: " + list);
    }
    it->second.set(p, key, trim(value));
}

void apply_assignment(SelectParams& p, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + assignment + "'");
    set_param(p, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::map<std::string, std::string> param_map(const SelectParams& p) {
    std::map<std::string, std::string> out;
    for (const auto& [k, f] : fields()) out[k] = f.get(p);
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", n);
        out.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return out;
}

}  // namespace selstream
