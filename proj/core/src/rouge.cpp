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

#include "otsum/rouge.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

namespace otsum {

namespace {

RougeScore from_counts(double overlap, double candidate_total,
                       double reference_total) {
  RougeScore score;
  if (candidate_total <= 0.0 || reference_total <= 0.0) return score;
  score.precision = overlap / candidate_total;
  score.recall = overlap / reference_total;
  if (score.precision + score.recall > 0.0) {
    score.f1 = 2.0 * score.precision * score.recall /
               (score.precision + score.recall);
  }
  return score;
}

std::unordered_map<std::string, std::size_t> ngram_counts(
    std::span<const std::string> tokens, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += '\x1f';  // unit separator, cannot occur inside a token
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, std::size_t n) {
  if (n < 1 || candidate.size() < n || reference.size() < n) return {};
  const auto candidate_counts = ngram_counts(candidate, n);
  const auto reference_counts = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : candidate_counts) {
    auto it = reference_counts.find(gram);
    if (it != reference_counts.end()) {
      overlap += std::min(count, it->second);  // clipped match count
    }
  }
  return from_counts(static_cast<double>(overlap),
                     static_cast<double>(candidate.size() - n + 1),
                     static_cast<double>(reference.size() - n + 1));
}

RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return {};
  // Two-row LCS dynamic program.
  std::vector<std::size_t> prev(reference.size() + 1, 0);
  std::vector<std::size_t> curr(reference.size() + 1, 0);
  for (std::size_t i = 1; i <= candidate.size(); ++i) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  return from_counts(static_cast<double>(prev[reference.size()]),
                     static_cast<double>(candidate.size()),
                     static_cast<double>(reference.size()));
}

}  // namespace otsum
