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

#include "ntm/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ntm/binary_io.hpp"
#include "ntm/errors.hpp"

namespace ntm {
namespace {

constexpr std::string_view kCacheMagic = "NTMC";
constexpr std::uint32_t kCacheVersion = 1;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits on blanks and parses every field as a signed integer.
std::vector<std::int64_t> parse_ints(std::string_view line, std::size_t line_no) {
  std::vector<std::int64_t> out;
  line = trim(line);
  while (!line.empty()) {
    std::size_t end = 0;
    while (end < line.size() && !is_space(line[end])) ++end;
    std::string_view field = line.substr(0, end);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw FormatError("not an integer: '" + std::string(field) + "'", line_no);
    }
    out.push_back(value);
    line = trim(line.substr(end));
  }
  return out;
}

std::int64_t parse_header_line(std::istream& in, std::size_t line_no, const char* name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(std::string("missing header field ") + name, line_no);
  }
  const auto fields = parse_ints(line, line_no);
  if (fields.size() != 1) {
    throw FormatError(std::string("header field ") + name + " must be a single integer", line_no);
  }
  if (fields[0] < 0) throw FormatError(std::string("negative header field ") + name, line_no);
  return fields[0];
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw DataError("vocabulary is empty");
  if (tokens_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("vocabulary too large");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
    if (!inserted) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "' at positions " +
                      std::to_string(it->second + 1) + " and " + std::to_string(i + 1));
    }
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseDoc::SparseDoc(std::vector<WordCount> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const WordCount& a, const WordCount& b) { return a.word < b.word; });
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.count == 0) throw std::invalid_argument("SparseDoc: zero count");
    if (!entries_.empty() && entries_.back().word == e.word) {
      const std::uint64_t merged = std::uint64_t{entries_.back().count} + e.count;
      if (merged > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("SparseDoc: count overflow");
      }
      entries_.back().count = static_cast<std::uint32_t>(merged);
    } else {
      entries_.push_back(e);
    }
    total_ += e.count;
  }
  if (total_ == 0) throw std::invalid_argument("SparseDoc: empty document");
}

Corpus::Corpus(Vocabulary vocab, std::vector<SparseDoc> docs, std::vector<std::uint64_t> labels)
    : vocab_(std::move(vocab)), docs_(std::move(docs)), labels_(std::move(labels)) {
  if (vocab_.size() == 0) throw DataError("corpus has an empty vocabulary");
  if (docs_.empty()) throw DataError("corpus has no documents");
  if (!labels_.empty() && labels_.size() != docs_.size()) {
    throw DataError("corpus: label count does not match document count");
  }
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (docs_[i].entries().back().word >= vocab_.size()) {
      throw DataError("corpus: document " + std::to_string(i) + " references word id " +
                      std::to_string(docs_[i].entries().back().word) +
                      " outside vocabulary of size " + std::to_string(vocab_.size()));
    }
  }
}

std::uint64_t Corpus::num_tokens() const {
  std::uint64_t n = 0;
  for (const auto& d : docs_) n += d.total();
  return n;
}

std::vector<std::uint64_t> Corpus::word_totals() const {
  std::vector<std::uint64_t> totals(vocab_.size(), 0);
  for (const auto& d : docs_) {
    for (const auto& e : d.entries()) totals[e.word] += e.count;
  }
  return totals;
}

Corpus load_uci_bow(std::istream& docword, std::istream& vocab_in) {
  const auto n_docs = parse_header_line(docword, 1, "I");
  const auto n_words = parse_header_line(docword, 2, "N");
  const auto nnz = parse_header_line(docword, 3, "NNZ");
  if (n_words == 0) throw FormatError("vocabulary size N is zero", 2);
  if (n_words > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("vocabulary size N too large", 2);
  }

  std::vector<std::vector<WordCount>> rows(static_cast<std::size_t>(n_docs));
  std::string line;
  std::size_t line_no = 3;
  std::int64_t seen = 0;
  while (std::getline(docword, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = parse_ints(line, line_no);
    if (f.size() != 3) throw FormatError("expected 'docID wordID count'", line_no);
    if (seen == nnz) {
      throw FormatError("more entries than NNZ=" + std::to_string(nnz), line_no);
    }
    if (f[0] < 1 || f[0] > n_docs) {
      throw FormatError("docID " + std::to_string(f[0]) + " outside [1," +
                            std::to_string(n_docs) + "]",
                        line_no);
    }
    if (f[1] < 1 || f[1] > n_words) {
      throw FormatError("wordID " + std::to_string(f[1]) + " outside [1," +
                            std::to_string(n_words) + "]",
                        line_no);
    }
    if (f[2] < 1) throw FormatError("non-positive count " + std::to_string(f[2]), line_no);
    if (f[2] > std::numeric_limits<std::uint32_t>::max()) {
      throw FormatError("count too large", line_no);
    }
    rows[static_cast<std::size_t>(f[0] - 1)].push_back(
        {static_cast<std::uint32_t>(f[1] - 1), static_cast<std::uint32_t>(f[2])});
    ++seen;
  }
  if (seen != nnz) {
    throw FormatError("expected NNZ=" + std::to_string(nnz) + " entries, found " +
                          std::to_string(seen),
                      line_no);
  }

  std::vector<std::string> tokens;
  tokens.reserve(static_cast<std::size_t>(n_words));
  std::size_t vocab_line = 0;
  while (std::getline(vocab_in, line)) {
    ++vocab_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<std::int64_t>(tokens.size()) == n_words) {
      if (line.empty()) continue;
      throw FormatError("vocabulary has more than N=" + std::to_string(n_words) + " lines",
                        vocab_line);
    }
    tokens.push_back(std::move(line));
  }
  if (static_cast<std::int64_t>(tokens.size()) != n_words) {
    throw FormatError("vocabulary has " + std::to_string(tokens.size()) +
                          " lines, header declares N=" + std::to_string(n_words),
                      vocab_line);
  }

  std::vector<SparseDoc> docs;
  std::vector<std::uint64_t> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    try {
      docs.emplace_back(std::move(rows[i]));
    } catch (const std::invalid_argument& e) {
      throw FormatError("document " + std::to_string(i + 1) + ": " + e.what());
    }
    labels.push_back(i + 1);
  }
  if (docs.empty()) {
    throw FormatError(n_docs == 0 ? "corpus declares zero documents"
                                  : "every document is empty after parse (NNZ=" +
                                        std::to_string(nnz) + ")");
  }
  return Corpus(Vocabulary(std::move(tokens)), std::move(docs), std::move(labels));
}

Corpus load_uci_bow(const std::filesystem::path& docword, const std::filesystem::path& vocab) {
  std::istringstream dw(binary::read_file(docword));
  std::istringstream vc(binary::read_file(vocab));
  return load_uci_bow(dw, vc);
}

void save_uci_bow(const Corpus& corpus, std::ostream& docword, std::ostream& vocab) {
  std::uint64_t max_id = corpus.num_docs();
  if (!corpus.labels().empty()) {
    max_id = *std::max_element(corpus.labels().begin(), corpus.labels().end());
  }
  std::size_t nnz = 0;
  for (const auto& d : corpus.docs()) nnz += d.entries().size();
  docword << max_id << '\n' << corpus.num_words() << '\n' << nnz << '\n';
  for (std::size_t i = 0; i < corpus.num_docs(); ++i) {
    const std::uint64_t id = corpus.labels().empty() ? i + 1 : corpus.labels()[i];
    for (const auto& e : corpus.doc(i).entries()) {
      docword << id << ' ' << (e.word + 1) << ' ' << e.count << '\n';
    }
  }
  for (const auto& t : corpus.vocab().tokens()) vocab << t << '\n';
}

Corpus filter_min_count(const Corpus& corpus, std::uint64_t threshold) {
  if (threshold == 0) throw std::invalid_argument("filter_min_count: threshold must be >= 1");
  const auto totals = corpus.word_totals();
  constexpr auto kDropped = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(totals.size(), kDropped);
  std::vector<std::string> tokens;
  for (std::size_t n = 0; n < totals.size(); ++n) {
    if (totals[n] >= threshold) {
      remap[n] = static_cast<std::uint32_t>(tokens.size());
      tokens.push_back(corpus.vocab().tokens()[n]);
    }
  }
  if (tokens.empty()) throw DataError("corpus emptied by filter (min count " +
                                      std::to_string(threshold) + ")");

  std::vector<SparseDoc> docs;
  std::vector<std::uint64_t> labels;
  for (std::size_t i = 0; i < corpus.num_docs(); ++i) {
    std::vector<WordCount> kept;
    for (const auto& e : corpus.doc(i).entries()) {
      if (remap[e.word] != kDropped) kept.push_back({remap[e.word], e.count});
    }
    if (kept.empty()) continue;
    docs.emplace_back(std::move(kept));
    if (!corpus.labels().empty()) labels.push_back(corpus.labels()[i]);
  }
  if (docs.empty()) throw DataError("corpus emptied by filter (min count " +
                                    std::to_string(threshold) + ")");
  return Corpus(Vocabulary(std::move(tokens)), std::move(docs), std::move(labels));
}

SparseVector normalize(const SparseDoc& doc, std::size_t n_words) {
  SparseVector f;
  f.index.reserve(doc.entries().size());
  f.value.reserve(doc.entries().size());
  const double total = static_cast<double>(doc.total());
  for (const auto& e : doc.entries()) {
    if (e.word >= n_words) throw std::out_of_range("normalize: word id outside vocabulary");
    f.index.push_back(e.word);
    f.value.push_back(static_cast<double>(e.count) / total);
  }
  return f;
}

std::vector<SparseVector> normalize_all(const Corpus& corpus) {
  std::vector<SparseVector> out;
  out.reserve(corpus.num_docs());
  for (const auto& d : corpus.docs()) out.push_back(normalize(d, corpus.num_words()));
  return out;
}

void save_cache(const Corpus& corpus, std::ostream& out) {
  using namespace binary;
  if (corpus.num_docs() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many documents for the cache format");
  }
  write_bytes(out, kCacheMagic);
  write_u32(out, kCacheVersion);
  write_u32(out, static_cast<std::uint32_t>(corpus.num_docs()));
  write_u32(out, static_cast<std::uint32_t>(corpus.num_words()));
  for (std::size_t i = 0; i < corpus.num_docs(); ++i) {
    const auto& d = corpus.doc(i);
    const std::uint64_t label = corpus.labels().empty() ? i + 1 : corpus.labels()[i];
    write_u32(out, static_cast<std::uint32_t>(label));
    write_u32(out, static_cast<std::uint32_t>(d.entries().size()));
    for (const auto& e : d.entries()) {
      write_u32(out, e.word);
      write_u32(out, e.count);
    }
  }
  for (const auto& t : corpus.vocab().tokens()) {
    write_u32(out, static_cast<std::uint32_t>(t.size()));
    write_bytes(out, t);
  }
  if (!out) throw IoError("failed writing corpus cache");
}

Corpus load_cache(std::istream& in) {
  using namespace binary;
  if (read_bytes(in, 4, "cache magic") != kCacheMagic) {
    throw FormatError("not a corpus cache (bad magic)");
  }
  const auto version = read_u32(in, "cache version");
  if (version != kCacheVersion) {
    throw FormatError("unsupported corpus cache version " + std::to_string(version));
  }
  const auto n_docs = read_u32(in, "document count");
  const auto n_words = read_u32(in, "vocabulary size");
  std::vector<SparseDoc> docs;
  std::vector<std::uint64_t> labels;
  docs.reserve(n_docs);
  labels.reserve(n_docs);
  for (std::uint32_t i = 0; i < n_docs; ++i) {
    labels.push_back(read_u32(in, "document label"));
    const auto nnz = read_u32(in, "document length");
    std::vector<WordCount> entries(nnz);
    std::uint32_t prev = 0;
    for (std::uint32_t j = 0; j < nnz; ++j) {
      entries[j].word = read_u32(in, "word id");
      entries[j].count = read_u32(in, "count");
      if (entries[j].word >= n_words || entries[j].count == 0 ||
          (j > 0 && entries[j].word <= prev)) {
        throw FormatError("corrupt corpus cache: bad entry in document " + std::to_string(i));
      }
      prev = entries[j].word;
    }
    if (entries.empty()) throw FormatError("corrupt corpus cache: empty document");
    docs.emplace_back(std::move(entries));
  }
  std::vector<std::string> tokens;
  tokens.reserve(n_words);
  for (std::uint32_t n = 0; n < n_words; ++n) {
    const auto len = read_u32(in, "token length");
    tokens.push_back(read_bytes(in, len, "token"));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("corrupt corpus cache: trailing bytes");
  }
  return Corpus(Vocabulary(std::move(tokens)), std::move(docs), std::move(labels));
}

void save_cache(const Corpus& corpus, const std::filesystem::path& path) {
  std::ostringstream out;
  save_cache(corpus, out);
  binary::write_file(path, out.str());
}

Corpus load_cache(const std::filesystem::path& path) {
  std::istringstream in(binary::read_file(path));
  return load_cache(in);
}

}  // namespace ntm
