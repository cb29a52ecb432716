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

#ifndef OTSUM_TEXT_MODEL_HPP_
#define OTSUM_TEXT_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace otsum {

// Token string -> row index in an embedding table.
using TokenIdMap = std::unordered_map<std::string, std::size_t>;

// The distinct tokens of one document after filtering, ordered by first
// occurrence. Its size p is the dimension of the transport problem.
struct ActiveVocabulary {
  std::vector<std::string> tokens;
  // Embedding-table row per token; unset only when OOV tokens were kept.
  std::vector<std::optional<std::size_t>> global_ids;
  std::unordered_map<std::string, std::uint32_t> local_ids;

  std::size_t size() const { return tokens.size(); }
  std::optional<std::uint32_t> find(std::string_view token) const;
};

struct Document {
  // Each sentence is the sequence of surviving token ids (< p). A sentence
  // whose tokens were all filtered away keeps its slot with an empty
  // sequence so indices stay aligned with the input.
  std::vector<std::vector<std::uint32_t>> sentences;
  std::vector<std::string> source_text;  // parallel to sentences

  std::size_t size() const { return sentences.size(); }
  // Empty sentences have the zero semantic distribution and are never
  // candidates for extraction.
  bool eligible(std::size_t i) const { return !sentences[i].empty(); }
  std::size_t eligible_count() const;
};

// Sparse nonnegative vector over the active vocabulary. Every stored weight
// is strictly positive; a valid distribution sums to 1 within 1e-12. The
// empty entry list is the designated zero vector used for all-stop-word
// sentences.
class Distribution {
 public:
  struct Entry {
    std::uint32_t id;
    double weight;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Distribution() = default;
  // Sorts by id, merges duplicates, drops zero weights. Negative weights
  // are a contract violation.
  explicit Distribution(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  double sum() const;
  double weight(std::uint32_t id) const;
  Eigen::VectorXd to_dense(std::size_t p) const;
  // Divides by sum(); zero vector stays zero.
  Distribution normalized() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<Entry> entries_;
};

// Length-n 0/1 vector marking selected sentences.
struct ExtractionVector {
  std::vector<std::uint8_t> marks;

  std::size_t size() const { return marks.size(); }
  std::size_t count() const;
  std::vector<std::uint32_t> indices() const;

  static ExtractionVector ones(std::size_t n);
  static ExtractionVector from_indices(std::span<const std::uint32_t> indices,
                                       std::size_t n);

  friend bool operator==(const ExtractionVector&,
                         const ExtractionVector&) = default;
};

struct TokenizeOptions {
  bool lowercase = true;
  // Tokens in this set are removed before anything else. Empty set disables
  // stop-word removal.
  std::unordered_set<std::string> stopwords;
  // Drop tokens absent from the embedding vocabulary (counted, reported).
  // When false such tokens are kept and cost-matrix construction will fail
  // on them.
  bool drop_oov = true;
};

struct TokenizeResult {
  Document document;
  ActiveVocabulary vocab;
  std::size_t oov_dropped = 0;
};

// Rule-based splitter: a run of '.', '!' or '?' followed by whitespace (or
// end of input) terminates a sentence.
std::vector<std::string> split_sentences(std::string_view text);

// Splits on runs of non-alphanumeric bytes. ASCII letters are lowercased
// when requested; bytes >= 0x80 are treated as token characters so UTF-8
// sequences pass through unsplit.
std::vector<std::string> split_tokens(std::string_view text, bool lowercase);

TokenizeResult tokenize(std::string_view text, const TokenIdMap& embedding_vocab,
                        const TokenizeOptions& options);
TokenizeResult tokenize(std::span<const std::string> sentences,
                        const TokenIdMap& embedding_vocab,
                        const TokenizeOptions& options);

// Normalized bag of tokens: weight(j) = count(j) / len(sentence). An empty
// sentence yields the zero vector.
Distribution sentence_distribution(std::span<const std::uint32_t> sentence,
                                   std::size_t vocab_size);

std::vector<Distribution> sentence_distributions(const Document& doc,
                                                 std::size_t vocab_size);

// Unweighted mean of the sentence distributions, renormalized to sum 1 when
// zero-vector members shrank the mean.
Distribution document_distribution(std::span<const Distribution> sentence_dists);

// Mean of the selected sentence distributions, renormalized like
// document_distribution.
Distribution summary_distribution(std::span<const Distribution> sentence_dists,
                                  const ExtractionVector& marks);

}  // namespace otsum

#endif  // OTSUM_TEXT_MODEL_HPP_
