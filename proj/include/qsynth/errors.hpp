// Copyright 2026 The qsynth Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qsynth {

// Base class for everything thrown by the library, so callers can catch one
// type at the CLI boundary and map it to an exit code.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The coupling graph (or the subgraph a routine needs) has no spanning tree.
struct DisconnectedGraph : Error {
  explicit DisconnectedGraph(const std::string& msg) : Error(msg) {}
};

struct NotUnitary : Error {
  explicit NotUnitary(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

// A pulse references states outside [0, d) or is otherwise malformed.
struct InvalidPulse : Error {
  explicit InvalidPulse(const std::string& msg) : Error(msg) {}
};

// Determinant not 1 where an SU(2) block is required.
struct NotSpecialUnitary : Error {
  explicit NotSpecialUnitary(const std::string& msg) : Error(msg) {}
};

// State-preparation recursion ran out of amplitude (cosine product underflow).
struct DegenerateTail : Error {
  explicit DegenerateTail(const std::string& msg) : Error(msg) {}
};

// Two-qudit spectral synthesis only handles product-form eigenvectors.
struct NotProductEigenvector : Error {
  explicit NotProductEigenvector(const std::string& msg) : Error(msg) {}
};

struct UnknownPreset : Error {
  explicit UnknownPreset(const std::string& msg) : Error(msg) {}
};

// Malformed input file; message names the file and the offending field.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace qsynth
