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

#include <map>
#include <string>
#include <vector>

#include "selstream/engine.hpp"

namespace selstream {

/// Every key accepted by set_param, sorted.
std::vector<std::string> param_keys();

/// Throws UsageError for an unknown key (listing the valid ones) or a value
/// that does not parse.
void set_param(SelectParams& p, const std::string& key, const std::string& value);

/// Applies "key=value".
void apply_assignment(SelectParams& p, const std::string& assignment);

/// Resolved parameters, values in canonical form.
std::map<std::string, std::string> param_map(const SelectParams& p);

/// Flat key=value lines; blank lines and lines starting with '#' are
/// skipped. Throws ParseError with the line number on anything else.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace selstream
