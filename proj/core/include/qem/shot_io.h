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

#ifndef QEM_SHOT_IO_H
#define QEM_SHOT_IO_H

#include <filesystem>
#include <string>
#include <string_view>

#include "qem/shot_dataset.h"

namespace qem {

// Shots text: one bit-string per line, most-significant qubit first, blank
// lines ignored, trailing newline optional.
//
// Counts file: a JSON object mapping bit-strings to positive integer counts,
// e.g. {"0101": 3, "1100": 7}. Written with keys in lexicographic order.

ShotDataset parse_shots_text(std::string_view text);
ShotDataset load_shots_text(const std::filesystem::path &path);

ShotDataset parse_counts(std::string_view text);
ShotDataset load_counts(const std::filesystem::path &path);

std::string format_counts(const ShotDataset &dataset);
void save_counts(const ShotDataset &dataset, const std::filesystem::path &path);

/// Reads either format; a file whose first non-blank character is '{' is a
/// counts file.
ShotDataset load_dataset(const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

}  // namespace qem

#endif
