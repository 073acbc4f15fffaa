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

#ifndef QEM_ERROR_H
#define QEM_ERROR_H

#include <stdexcept>
#include <string>

namespace qem {

/// Base class for every error raised by the library.
///
/// Errors split into two families that callers (notably the CLI) treat
/// differently: `DataError` for bad inputs, files and infeasible requests, and
/// `NumericalError` for degenerate models that arise during estimation.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

/// Bit-strings of different lengths were combined.
struct DimensionError : DataError {
    using DataError::DataError;
};

/// Malformed input text. `line` is 1-based, or 0 when not applicable.
struct ParseError : DataError {
    ParseError(const std::string &message, size_t line = 0)
        : DataError(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line(line) {
    }
    size_t line;
};

struct EmptyDatasetError : DataError {
    using DataError::DataError;
};

struct IoError : DataError {
    using DataError::DataError;
};

/// A request that cannot be satisfied, e.g. more distinct strings than exist.
struct InfeasibleError : DataError {
    using DataError::DataError;
};

/// The depolarization filter removed every shot.
struct AllFilteredError : DataError {
    using DataError::DataError;
};

/// Every mixture component was annihilated.
struct DegenerateModelError : NumericalError {
    using NumericalError::NumericalError;
};

/// Model parameters that cannot produce a likelihood (e.g. all weights zero).
struct InvalidModelError : NumericalError {
    using NumericalError::NumericalError;
};

struct NormalizationError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace qem

#endif
