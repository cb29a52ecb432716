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

#include "otsum/text_model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <utility>

#include "otsum/error.hpp"

namespace otsum {

namespace {

bool is_token_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::optional<std::uint32_t> ActiveVocabulary::find(std::string_view token) const {
  auto it = local_ids.find(std::string(token));
  if (it == local_ids.end()) return std::nullopt;
  return it->second;
}

std::size_t Document::eligible_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (eligible(i)) ++count;
  }
  return count;
}

Distribution::Distribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
  // Sorting duplicates by weight fixes the summation order, making the
  // merged result invariant to the caller's accumulation order.
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.id != b.id ? a.id < b.id : a.weight < b.weight;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].weight < 0.0) {
      throw Error(ErrorCode::kInternal, "negative distribution weight");
    }
    if (out > 0 && entries_[out - 1].id == entries_[i].id) {
      entries_[out - 1].weight += entries_[i].weight;
    } else {
      entries_[out++] = entries_[i];
    }
  }
  entries_.resize(out);
  std::erase_if(entries_, [](const Entry& e) { return e.weight == 0.0; });
}

double Distribution::sum() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.weight;
  return total;
}

double Distribution::weight(std::uint32_t id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry& e, std::uint32_t key) { return e.id < key; });
  if (it == entries_.end() || it->id != id) return 0.0;
  return it->weight;
}

Eigen::VectorXd Distribution::to_dense(std::size_t p) const {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (const Entry& e : entries_) {
    if (e.id >= p) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "distribution id " + std::to_string(e.id) +
                      " outside dense size " + std::to_string(p));
    }
    dense[static_cast<Eigen::Index>(e.id)] = e.weight;
  }
  return dense;
}

Distribution Distribution::normalized() const {
  if (entries_.empty()) return {};
  const double total = sum();
  std::vector<Entry> scaled = entries_;
  for (Entry& e : scaled) e.weight /= total;
  return Distribution(std::move(scaled));
}

std::size_t ExtractionVector::count() const {
  return static_cast<std::size_t>(
      std::count(marks.begin(), marks.end(), std::uint8_t{1}));
}

std::vector<std::uint32_t> ExtractionVector::indices() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

ExtractionVector ExtractionVector::ones(std::size_t n) {
  return ExtractionVector{std::vector<std::uint8_t>(n, 1)};
}

ExtractionVector ExtractionVector::from_indices(
    std::span<const std::uint32_t> indices, std::size_t n) {
  ExtractionVector v{std::vector<std::uint8_t>(n, 0)};
  for (std::uint32_t i : indices) {
    if (i >= n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sentence index " + std::to_string(i) + " >= " +
                      std::to_string(n));
    }
    v.marks[i] = 1;
  }
  return v;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    std::string_view s = trim(text.substr(start, end - start));
    if (!s.empty()) sentences.emplace_back(s);
    start = end;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i;
      while (j < text.size() &&
             (text[j] == '.' || text[j] == '!' || text[j] == '?')) {
        ++j;
      }
      if (j >= text.size() ||
          std::isspace(static_cast<unsigned char>(text[j]))) {
        flush(j);
        i = j;
        continue;
      }
      i = j;
      continue;
    }
    ++i;
  }
  flush(text.size());
  return sentences;
}

std::vector<std::string> split_tokens(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_token_char(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_token_char(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    std::string token(text.substr(i, j - i));
    if (lowercase) {
      for (char& c : token) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    tokens.push_back(std::move(token));
    i = j;
  }
  return tokens;
}

TokenizeResult tokenize(std::string_view text, const TokenIdMap& embedding_vocab,
                        const TokenizeOptions& options) {
  return tokenize(split_sentences(text), embedding_vocab, options);
}

TokenizeResult tokenize(std::span<const std::string> sentences,
                        const TokenIdMap& embedding_vocab,
                        const TokenizeOptions& options) {
  TokenizeResult result;
  result.document.sentences.reserve(sentences.size());
  result.document.source_text.assign(sentences.begin(), sentences.end());
  bool any_token = false;
  for (const std::string& raw : sentences) {
    std::vector<std::uint32_t> ids;
    for (std::string& token : split_tokens(raw, options.lowercase)) {
      if (options.stopwords.contains(token)) continue;
      auto global = embedding_vocab.find(token);
      if (global == embedding_vocab.end() && options.drop_oov) {
        ++result.oov_dropped;
        continue;
      }
      auto [it, inserted] = result.vocab.local_ids.try_emplace(
          token, static_cast<std::uint32_t>(result.vocab.tokens.size()));
      if (inserted) {
        result.vocab.tokens.push_back(token);
        result.vocab.global_ids.emplace_back(
            global == embedding_vocab.end()
                ? std::nullopt
                : std::optional<std::size_t>(global->second));
      }
      ids.push_back(it->second);
      any_token = true;
    }
    result.document.sentences.push_back(std::move(ids));
  }
  if (!any_token) {
    throw Error(ErrorCode::kEmptyDocument,
                "no sentence has a surviving token after filtering");
  }
  return result;
}

Distribution sentence_distribution(std::span<const std::uint32_t> sentence,
                                   std::size_t vocab_size) {
  if (sentence.empty()) return {};
  std::vector<Distribution::Entry> entries;
  const double unit = 1.0 / static_cast<double>(sentence.size());
  for (std::uint32_t id : sentence) {
    if (id >= vocab_size) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "token id " + std::to_string(id) + " >= vocabulary size " +
                      std::to_string(vocab_size));
    }
    entries.push_back({id, unit});
  }
  return Distribution(std::move(entries));
}

std::vector<Distribution> sentence_distributions(const Document& doc,
                                                 std::size_t vocab_size) {
  std::vector<Distribution> dists;
  dists.reserve(doc.size());
  for (const auto& sentence : doc.sentences) {
    dists.push_back(sentence_distribution(sentence, vocab_size));
  }
  return dists;
}

namespace {

// Mean of the given distributions renormalized to sum 1; zero-vector
// members only shrink the pre-normalization sum, so this equals the mean
// over the non-zero members.
Distribution mean_distribution(std::span<const Distribution> dists,
                               const std::vector<std::uint8_t>* marks) {
  std::vector<Distribution::Entry> acc;
  bool any = false;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (marks != nullptr && !(*marks)[i]) continue;
    if (dists[i].is_zero()) continue;
    any = true;
    const auto& entries = dists[i].entries();
    acc.insert(acc.end(), entries.begin(), entries.end());
  }
  if (!any) {
    throw Error(ErrorCode::kAllSentencesEmpty,
                "every sentence distribution is the zero vector");
  }
  return Distribution(std::move(acc)).normalized();
}

}  // namespace

Distribution document_distribution(std::span<const Distribution> sentence_dists) {
  if (sentence_dists.empty()) {
    throw Error(ErrorCode::kAllSentencesEmpty, "empty sentence list");
  }
  return mean_distribution(sentence_dists, nullptr);
}

Distribution summary_distribution(std::span<const Distribution> sentence_dists,
                                  const ExtractionVector& marks) {
  if (marks.size() != sentence_dists.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "extraction vector length " + std::to_string(marks.size()) +
                    " != sentence count " +
                    std::to_string(sentence_dists.size()));
  }
  if (marks.count() == 0) {
    throw Error(ErrorCode::kEmptySelection, "no sentence selected");
  }
  return mean_distribution(sentence_dists, &marks.marks);
}

}  // namespace otsum
