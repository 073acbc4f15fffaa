// Copyright 2026 The qem-mix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qem/shot_io.h"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qem/error.h"

namespace qem {

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

ShotDataset parse_shots_text(std::string_view text) {
    std::vector<BitString> shots;
    size_t line_no = 0;
    size_t width = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        BitString s;
        try {
            s = BitString::from_text(line);
        } catch (const ParseError &e) {
            throw ParseError(e.what(), line_no);
        }
        if (shots.empty()) {
            width = s.size();
        } else if (s.size() != width) {
            throw DimensionError(
                "line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " bits, got " +
                std::to_string(s.size()));
        }
        shots.push_back(std::move(s));
    }
    if (shots.empty()) {
        throw EmptyDatasetError("no shots found");
    }
    return ShotDataset::from_shots(shots);
}

ShotDataset load_shots_text(const std::filesystem::path &path) {
    try {
        return parse_shots_text(read_file(path));
    } catch (const EmptyDatasetError &) {
        throw EmptyDatasetError("'" + path.string() + "' contains no shots");
    }
}

ShotDataset parse_counts(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("invalid counts JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("counts file must be a JSON object");
    }
    CountTable table;
    for (const auto &[key, value] : doc.items()) {
        BitString s;
        try {
            s = BitString::from_text(key);
        } catch (const ParseError &e) {
            throw ParseError("key '" + key + "': " + e.what());
        }
        if (s.size() == 0) {
            throw ParseError("empty bit-string key");
        }
        if (!value.is_number_integer() || value.get<int64_t>() <= 0) {
            throw ParseError("count for '" + key + "' must be a positive integer");
        }
        if (!table.empty() && table.begin()->first.size() != s.size()) {
            throw DimensionError("key '" + key + "' has a different width than earlier keys");
        }
        table[s] += value.get<uint64_t>();
    }
    if (table.empty()) {
        throw EmptyDatasetError("count table is empty");
    }
    return ShotDataset::from_counts(table);
}

ShotDataset load_counts(const std::filesystem::path &path) {
    return parse_counts(read_file(path));
}

std::string format_counts(const ShotDataset &dataset) {
    // std::map-backed json keeps keys sorted; counts() is already sorted too.
    nlohmann::json doc = nlohmann::json::object();
    for (const auto &[key, count] : dataset.counts()) {
        doc[key.to_text()] = count;
    }
    return doc.dump(2) + "\n";
}

void save_counts(const ShotDataset &dataset, const std::filesystem::path &path) {
    write_file(path, format_counts(dataset));
}

ShotDataset load_dataset(const std::filesystem::path &path) {
    std::string text = read_file(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_counts(text);
    }
    try {
        return parse_shots_text(text);
    } catch (const EmptyDatasetError &) {
        throw EmptyDatasetError("'" + path.string() + "' contains no shots");
    }
}

}  // namespace qem
