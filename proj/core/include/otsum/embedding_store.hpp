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

#ifndef OTSUM_EMBEDDING_STORE_HPP_
#define OTSUM_EMBEDDING_STORE_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "otsum/text_model.hpp"

namespace otsum {

// Pretrained token embeddings, one fixed-length vector per distinct token.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::vector<std::string> tokens;
  Eigen::MatrixXd vectors;  // size() x dim, row per token
  TokenIdMap index;

  std::size_t size() const { return tokens.size(); }
};

enum class CostMetric { kEuclidean, kCosine };

const char* to_string(CostMetric metric);
CostMetric cost_metric_from_string(std::string_view name);

// Symmetric nonnegative p x p matrix of pairwise token transport costs with
// zero diagonal, restricted to one document's active vocabulary.
struct CostMatrix {
  Eigen::MatrixXd entries;
  CostMetric metric = CostMetric::kEuclidean;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

// Plain-text word2vec format: header "N dim", then one line per token
// "token f1 ... fdim".
EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable parse_embeddings(std::istream& in, std::string_view source_name);

// Pairwise costs over the active vocabulary. Euclidean: ||v_i - v_j||_2.
// Cosine: 1 - v_i.v_j / (||v_i|| ||v_j||), rejecting zero-norm vectors.
CostMatrix cost_matrix(const ActiveVocabulary& vocab, const EmbeddingTable& table,
                       CostMetric metric);

}  // namespace otsum

#endif  // OTSUM_EMBEDDING_STORE_HPP_
