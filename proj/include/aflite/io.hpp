// Copyright 2026 The AFLite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Embeddings file format:
//
//   id,f0,f1,...,f{d-1},label
//   a17,0.25,-1.5,...,3.0,1
//
// UTF-8, comma separated, one header line. Ids are unquoted tokens without
// commas; features are decimal floating point; label is a non-negative
// integer. Features are written with 17 significant digits so a save/load
// round trip is exact.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "aflite/core.hpp"

namespace aflite {

EmbeddedDataset parse_embeddings(std::istream& in);
EmbeddedDataset load_embeddings(const std::filesystem::path& path);

void write_embeddings(std::ostream& out, const EmbeddedDataset& dataset);
void save_embeddings(const std::filesystem::path& path, const EmbeddedDataset& dataset);

// "%.17g"
std::string format_double(double value);

}  // namespace aflite
