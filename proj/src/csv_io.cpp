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

#include "selstream/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "selstream/errors.hpp"

namespace selstream {
namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != end)
        throw ParseError("bad numeric value '" + std::string(cell) + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(cell) + "'", line);
    return v;
}

int parse_int(std::string_view cell, std::size_t line, const char* what) {
    cell = trim(cell);
    int v = 0;
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, v);
    if (cell.empty() || res.ec != std::errc() || res.ptr != end)
        throw ParseError(std::string("bad ") + what + " '" + std::string(cell) + "'", line);
    if (v < 0) throw ParseError(std::string("negative ") + what, line);
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Stream read_csv_stream(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++lineno;

    const auto header = split(line);
    std::size_t k = 0;
    while (k < header.size() && trim(header[k]) == "f" + std::to_string(k)) ++k;
    if (k >= header.size() || trim(header[k]) != "y")
        throw ParseError("header must be f0,...,f{k-1},y[,concept]", lineno);
    bool has_concept = false;
    if (k + 1 < header.size()) {
        if (k + 2 != header.size() || trim(header[k + 1]) != "concept")
            throw ParseError("unexpected header column after y", lineno);
        has_concept = true;
    }
    const std::size_t width = k + 1 + (has_concept ? 1 : 0);

    Stream stream;
    stream.feature_count = k;
    int max_label = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != width)
            throw ParseError("expected " + std::to_string(width) + " columns, got " + std::to_string(cells.size()),
                             lineno);
        Observation o;
        o.t = stream.observations.size();
        o.x.reserve(k);
        for (std::size_t i = 0; i < k; ++i) o.x.push_back(parse_double(cells[i], lineno));
        o.y = parse_int(cells[k], lineno, "label");
        if (has_concept && !trim(cells[k + 1]).empty()) o.concept_id = parse_int(cells[k + 1], lineno, "concept id");
        max_label = std::max(max_label, o.y);
        stream.observations.push_back(std::move(o));
    }
    stream.class_count = std::max(2, max_label + 1);

    // Segments are recoverable from the concept column of abrupt streams.
    if (stream.has_concepts()) {
        for (const auto& o : stream.observations) {
            if (stream.segments.empty() || stream.segments.back().concept_id != *o.concept_id)
                stream.segments.push_back({*o.concept_id, 0, 0});
            ++stream.segments.back().length;
        }
    }
    return stream;
}

Stream load_csv_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_csv_stream(in);
}

void write_csv_stream(const Stream& stream, std::ostream& out) {
    const bool with_concept = std::any_of(stream.observations.begin(), stream.observations.end(),
                                          [](const Observation& o) { return o.concept_id.has_value(); });
    std::string row;
    for (std::size_t i = 0; i < stream.feature_count; ++i) row += "f" + std::to_string(i) + ",";
    row += with_concept ? "y,concept\n" : "y\n";
    out << row;
    for (const auto& o : stream.observations) {
        if (o.x.size() != stream.feature_count) throw InputError("observation arity differs from stream arity");
        row.clear();
        for (double v : o.x) {
            row += format_double(v);
            row += ',';
        }
        row += std::to_string(o.y);
        if (with_concept) {
            row += ',';
            if (o.concept_id) row += std::to_string(*o.concept_id);
        }
        row += '\n';
        out << row;
    }
}

void write_csv_stream(const Stream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    write_csv_stream(stream, out);
    if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace selstream
