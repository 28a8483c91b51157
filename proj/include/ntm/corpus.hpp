// Copyright 2026 The NTM Authors. All Rights Reserved.
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

#ifndef NTM_CORPUS_HPP_
#define NTM_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ntm/numcore.hpp"

namespace ntm {

// Ordered list of unique tokens. Token text is opaque bytes.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws DataError on duplicate tokens or an empty list.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::uint32_t id) const { return tokens_.at(id); }
  std::optional<std::uint32_t> find(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct WordCount {
  std::uint32_t word = 0;
  std::uint32_t count = 0;

  friend bool operator==(const WordCount&, const WordCount&) = default;
};

// Bag of words for one document, in canonical form: word ids strictly
// increasing, counts >= 1, total > 0.
class SparseDoc {
 public:
  // Sorts entries and sums duplicate word ids. Throws std::invalid_argument
  // on a zero count or when the document is empty.
  explicit SparseDoc(std::vector<WordCount> entries);

  const std::vector<WordCount>& entries() const { return entries_; }
  std::uint64_t total() const { return total_; }

  friend bool operator==(const SparseDoc&, const SparseDoc&) = default;

 private:
  std::vector<WordCount> entries_;
  std::uint64_t total_ = 0;
};

// Immutable document-word count matrix with its vocabulary.
class Corpus {
 public:
  // Throws DataError if there are no documents or a word id is out of range.
  // `labels` is empty or has one external id per document.
  Corpus(Vocabulary vocab, std::vector<SparseDoc> docs, std::vector<std::uint64_t> labels = {});

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<SparseDoc>& docs() const { return docs_; }
  const SparseDoc& doc(std::size_t i) const { return docs_.at(i); }
  const std::vector<std::uint64_t>& labels() const { return labels_; }

  std::size_t num_docs() const { return docs_.size(); }
  std::size_t num_words() const { return vocab_.size(); }
  // Sum of all counts (sum_i N_i).
  std::uint64_t num_tokens() const;
  // Corpus-wide occurrence count per word id.
  std::vector<std::uint64_t> word_totals() const;

 private:
  Vocabulary vocab_;
  std::vector<SparseDoc> docs_;
  std::vector<std::uint64_t> labels_;
};

// Parses the UCI bag-of-words pair (docword.txt, vocab.txt). Ids on the wire
// are 1-based; duplicate (doc, word) triples are summed; documents with no
// entries are dropped and the original docIDs are kept as labels. Errors are
// FormatError carrying the offending line number.
Corpus load_uci_bow(std::istream& docword, std::istream& vocab);
// File variant; gzip-compressed inputs are detected by magic bytes.
Corpus load_uci_bow(const std::filesystem::path& docword, const std::filesystem::path& vocab);

// Writes the UCI pair. DocIDs are the labels when present, else 1..I.
void save_uci_bow(const Corpus& corpus, std::ostream& docword, std::ostream& vocab);

// Keeps words whose corpus-wide count is >= threshold, re-indexes the
// vocabulary compactly, and drops documents left empty. Throws DataError
// ("corpus emptied by filter") if nothing survives.
Corpus filter_min_count(const Corpus& corpus, std::uint64_t threshold);

// Empirical word frequencies f_n = c_n / sum_m c_m.
SparseVector normalize(const SparseDoc& doc, std::size_t n_words);
std::vector<SparseVector> normalize_all(const Corpus& corpus);

// "NTMC" binary cache.
void save_cache(const Corpus& corpus, std::ostream& out);
Corpus load_cache(std::istream& in);
void save_cache(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_cache(const std::filesystem::path& path);

}  // namespace ntm

#endif  // NTM_CORPUS_HPP_
