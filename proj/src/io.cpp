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

#include "aflite/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "aflite/error.hpp"

namespace aflite {
namespace {

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view StripCarriageReturn(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

EmbeddedDataset parse_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing header", line_no);
  const auto header = SplitCommas(StripCarriageReturn(line));
  if (header.size() < 3 || header.front() != "id" || header.back() != "label") {
    throw ParseError("header must be id,f0,...,f{d-1},label", line_no);
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 1] != "f" + std::to_string(j)) {
      throw ParseError("expected column 'f" + std::to_string(j) + "'", line_no);
    }
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<int> labels;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = StripCarriageReturn(line);
    if (text.empty()) continue;
    const auto fields = SplitCommas(text);
    if (fields.size() != dim + 2) {
      throw ParseError("expected " + std::to_string(dim) + " features, found " +
                           std::to_string(fields.size() < 2 ? 0 : fields.size() - 2),
                       line_no);
    }
    const std::string id(fields.front());
    if (id.empty()) throw ParseError("empty id", line_no);
    if (!seen.insert(id).second) throw ParseError("duplicate id '" + id + "'", line_no);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::string_view f = fields[j + 1];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty()) {
        throw ParseError("non-numeric feature '" + std::string(f) + "' in column f" +
                             std::to_string(j),
                         line_no);
      }
      if (!std::isfinite(v)) throw ParseError("non-finite feature in column f" + std::to_string(j), line_no);
      values.push_back(v);
    }
    const std::string_view l = fields.back();
    int label = -1;
    const auto [ptr, ec] = std::from_chars(l.data(), l.data() + l.size(), label);
    if (ec != std::errc() || ptr != l.data() + l.size() || l.empty() || label < 0) {
      throw ParseError("label '" + std::string(l) + "' is not a non-negative integer", line_no);
    }
    ids.push_back(id);
    labels.push_back(label);
  }

  Matrix features(ids.size(), dim);
  std::copy(values.begin(), values.end(), features.data().begin());
  return EmbeddedDataset(std::move(ids), std::move(features), std::move(labels));
}

EmbeddedDataset load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("io", "cannot open embeddings file '" + path.string() + "'");
  return parse_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddedDataset& dataset) {
  out << "id";
  for (std::size_t j = 0; j < dataset.dim(); ++j) out << ",f" << j;
  out << ",label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.ids()[i].find(',') != std::string::npos) {
      throw InputError("io", "id '" + dataset.ids()[i] + "' contains a comma");
    }
    out << dataset.ids()[i];
    for (double v : dataset.features().row(i)) out << ',' << format_double(v);
    out << ',' << dataset.labels()[i] << '\n';
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddedDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("io", "cannot write '" + path.string() + "'");
  write_embeddings(out, dataset);
}

}  // namespace aflite
