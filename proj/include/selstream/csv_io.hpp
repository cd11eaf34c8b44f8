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

#include <iosfwd>
#include <string>

#include "selstream/stream.hpp"

namespace selstream {

// Dataset CSV: header `f0,...,f{k-1},y,concept`. The concept column is
// optional; when present every row must carry an integer or an empty cell.
// Feature values are written with max_digits10 so a round trip is exact.

Stream read_csv_stream(std::istream& in);
Stream load_csv_stream(const std::string& path);

void write_csv_stream(const Stream& stream, std::ostream& out);
void write_csv_stream(const Stream& stream, const std::string& path);

/// Shortest round-trip decimal form of `v` (as printed in dataset files).
std::string format_double(double v);

}  // namespace selstream
