// Copyright 2026 The otsum Authors
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

#include "otsum/embedding_store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "otsum/error.hpp"

namespace otsum {

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line_no,
                             const std::string& what) {
  throw Error(ErrorCode::kParseError, std::string(source) + ":" +
                                          std::to_string(line_no) + ": " + what);
}

}  // namespace

const char* to_string(CostMetric metric) {
  switch (metric) {
    case CostMetric::kEuclidean: return "euclidean";
    case CostMetric::kCosine: return "cosine";
  }
  return "unknown";
}

CostMetric cost_metric_from_string(std::string_view name) {
  if (name == "euclidean") return CostMetric::kEuclidean;
  if (name == "cosine") return CostMetric::kCosine;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown cost metric \"" + std::string(name) + "\"");
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError,
                "cannot open embedding file " + path.string());
  }
  return parse_embeddings(in, path.string());
}

EmbeddingTable parse_embeddings(std::istream& in, std::string_view source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    parse_fail(source_name, 1, "missing header line");
  }
  ++line_no;
  std::size_t declared = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    long long n_field = -1;
    long long dim_field = -1;
    std::string extra;
    if (!(header >> n_field >> dim_field) || (header >> extra) ||
        n_field <= 0 || dim_field <= 0) {
      parse_fail(source_name, line_no, "header must be \"N dim\" with N, dim > 0");
    }
    declared = static_cast<std::size_t>(n_field);
    dim = static_cast<std::size_t>(dim_field);
  }

  EmbeddingTable table;
  table.dim = dim;
  table.tokens.reserve(declared);
  table.vectors.resize(static_cast<Eigen::Index>(declared),
                       static_cast<Eigen::Index>(dim));

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) {
      if (row < declared) parse_fail(source_name, line_no, "blank row");
      continue;
    }
    if (row >= declared) {
      parse_fail(source_name, line_no,
                 "more rows than the declared " + std::to_string(declared));
    }
    std::istringstream stream(line);
    std::vector<std::string> fields;
    for (std::string field; stream >> field;) fields.push_back(std::move(field));
    if (fields.size() != dim + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string(source_name) + ":" + std::to_string(line_no) +
                      ": row has " + std::to_string(fields.size() - 1) +
                      " values, expected " + std::to_string(dim));
    }
    std::string token = std::move(fields[0]);
    for (std::size_t col = 0; col < dim; ++col) {
      const std::string& field = fields[col + 1];
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(field, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != field.size()) {
        parse_fail(source_name, line_no, "malformed value \"" + field + "\"");
      }
      table.vectors(static_cast<Eigen::Index>(row),
                    static_cast<Eigen::Index>(col)) = value;
    }
    auto [it, inserted] = table.index.try_emplace(token, row);
    if (!inserted) {
      parse_fail(source_name, line_no, "duplicate token \"" + token + "\"");
    }
    table.tokens.push_back(std::move(token));
    ++row;
  }
  if (row != declared) {
    parse_fail(source_name, line_no,
               "expected " + std::to_string(declared) + " rows, found " +
                   std::to_string(row));
  }
  return table;
}

CostMatrix cost_matrix(const ActiveVocabulary& vocab, const EmbeddingTable& table,
                       CostMetric metric) {
  const std::size_t p = vocab.size();
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(p),
                          static_cast<Eigen::Index>(table.dim));
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t row;
    if (vocab.global_ids[i].has_value()) {
      row = *vocab.global_ids[i];
    } else {
      auto it = table.index.find(vocab.tokens[i]);
      if (it == table.index.end()) {
        throw Error(ErrorCode::kMissingToken,
                    "no embedding for token \"" + vocab.tokens[i] + "\"");
      }
      row = it->second;
    }
    if (row >= table.size()) {
      throw Error(ErrorCode::kMissingToken,
                  "embedding id " + std::to_string(row) + " for token \"" +
                      vocab.tokens[i] + "\" out of range");
    }
    vectors.row(static_cast<Eigen::Index>(i)) =
        table.vectors.row(static_cast<Eigen::Index>(row));
  }

  CostMatrix cost;
  cost.metric = metric;
  cost.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                       static_cast<Eigen::Index>(p));
  Eigen::VectorXd norms;
  if (metric == CostMetric::kCosine) {
    norms = vectors.rowwise().norm();
    for (std::size_t i = 0; i < p; ++i) {
      if (norms[static_cast<Eigen::Index>(i)] == 0.0) {
        throw Error(ErrorCode::kZeroNormVector,
                    "cosine distance undefined for zero-norm token \"" +
                        vocab.tokens[i] + "\"");
      }
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const auto vi = vectors.row(static_cast<Eigen::Index>(i));
      const auto vj = vectors.row(static_cast<Eigen::Index>(j));
      double c;
      if (metric == CostMetric::kEuclidean) {
        c = (vi - vj).norm();
      } else {
        c = 1.0 - vi.dot(vj) / (norms[static_cast<Eigen::Index>(i)] *
                                norms[static_cast<Eigen::Index>(j)]);
        c = std::clamp(c, 0.0, 2.0);
      }
      cost.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      cost.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  }
  return cost;
}

}  // namespace otsum
