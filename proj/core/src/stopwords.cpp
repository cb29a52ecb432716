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

#include "otsum/stopwords.hpp"

#include <cctype>
#include <fstream>

#include "otsum/error.hpp"

namespace otsum {

namespace {

// Common English function words. Single letters and fragments such as "s",
// "t", "ll", "ve" cover contraction pieces left over after punctuation
// splitting ("don't" tokenizes to "don", "t").
constexpr const char* kEnglishStopwords[] = {
    "a",       "about",   "above",  "after",   "again",   "against", "ain",
    "all",     "am",      "an",     "and",     "any",     "are",     "aren",
    "as",      "at",      "be",     "because", "been",    "before",  "being",
    "below",   "between", "both",   "but",     "by",      "can",     "couldn",
    "d",       "did",     "didn",   "do",      "does",    "doesn",   "doing",
    "don",     "down",    "during", "each",    "few",     "for",     "from",
    "further", "had",     "hadn",   "has",     "hasn",    "have",    "haven",
    "having",  "he",      "her",    "here",    "hers",    "herself", "him",
    "himself", "his",     "how",    "i",       "if",      "in",      "into",
    "is",      "isn",     "it",     "its",     "itself",  "just",    "ll",
    "m",       "ma",      "me",     "mightn",  "more",    "most",    "mustn",
    "my",      "myself",  "needn",  "no",      "nor",     "not",     "now",
    "o",       "of",      "off",    "on",      "once",    "only",    "or",
    "other",   "our",     "ours",   "ourselves", "out",   "over",    "own",
    "re",      "s",       "same",   "shan",    "she",     "should",  "shouldn",
    "so",      "some",    "such",   "t",       "than",    "that",    "the",
    "their",   "theirs",  "them",   "themselves", "then", "there",   "these",
    "they",    "this",    "those",  "through", "to",      "too",     "under",
    "until",   "up",      "ve",     "very",    "was",     "wasn",    "we",
    "were",    "weren",   "what",   "when",    "where",   "which",   "while",
    "who",     "whom",    "why",    "will",    "with",    "won",     "wouldn",
    "y",       "you",     "your",   "yours",   "yourself", "yourselves",
};

}  // namespace

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words(std::begin(kEnglishStopwords),
                                                     std::end(kEnglishStopwords));
  return words;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError,
                "cannot open stop-word file " + path.string());
  }
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() &&
           std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    std::size_t begin = 0;
    while (begin < line.size() &&
           std::isspace(static_cast<unsigned char>(line[begin]))) {
      ++begin;
    }
    std::string word = line.substr(begin);
    if (word.empty()) continue;
    for (char& c : word) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace otsum
