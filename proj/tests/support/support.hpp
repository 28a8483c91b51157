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

#ifndef NTM_TESTS_SUPPORT_HPP_
#define NTM_TESTS_SUPPORT_HPP_

// Test-only helpers: brute-force oracles that share no code path with the
// library's forward/backward passes, plus synthetic corpus generators.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ntm/corpus.hpp"
#include "ntm/model.hpp"

namespace ntm::testing {

// Corpus from per-document (word, count) lists over tokens w0..w{N-1}.
Corpus make_corpus(std::size_t n_words,
                   const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& docs);

// Random corpus with I docs over N words; every word appears at least once.
Corpus random_corpus(std::size_t docs, std::size_t words, std::uint64_t seed,
                     std::size_t min_len = 5, std::size_t max_len = 40);

// Parameters filled with uniform values in [-scale, scale].
DntmParams random_dntm(std::size_t docs, std::size_t words, std::size_t topics, std::size_t dim,
                       std::uint64_t seed, double scale = 0.5);
CntmParams random_cntm(std::size_t words, std::size_t topics, std::size_t dim, bool tied,
                       std::uint64_t seed, double scale = 0.5);

// Flattened parameter vector in tensors() order, and its inverse.
template <typename Params>
std::vector<double> flatten(const Params& p) {
  std::vector<double> out;
  for (const auto& t : p.tensors()) out.insert(out.end(), t.data.begin(), t.data.end());
  return out;
}

template <typename Params>
void unflatten(std::span<const double> flat, Params& p) {
  std::size_t off = 0;
  for (auto& t : p.tensors()) {
    for (double& v : t.data) v = flat[off++];
  }
}

// Naive exp/sum softmax with no max subtraction (inputs must be moderate).
std::vector<double> naive_softmax(const std::vector<double>& logits);

// Triple-loop oracles for the D-NTM probabilities.
std::vector<double> brute_word_given_topic(const DntmParams& p, std::size_t k);
std::vector<double> brute_topic_given_doc(const DntmParams& p, std::size_t i);
std::vector<double> brute_mixture(const DntmParams& p, std::size_t i);
std::vector<double> brute_direct(const DntmParams& p, std::size_t i);

// C-NTM oracles, same style.
std::vector<double> brute_encode(const CntmParams& p, const SparseVector& f);
std::vector<double> brute_cntm_mixture(const CntmParams& p, const std::vector<double>& x);

// log p(doc) by expanding the document into its token sequence and summing
// ln p_mix(word) token by token.
double brute_doc_log_likelihood(const Model& model, const Corpus& corpus, std::size_t doc);
double brute_perplexity(const Model& model, const Corpus& corpus);

// max_j |a_j - b_j| / max(1e-8, |b_j|)
double max_rel_error(std::span<const double> analytic, std::span<const double> reference);

// A corpus sampled from a planted PLSA model and that model's own mixture.
struct PlantedCorpus {
  Corpus corpus;
  std::vector<std::vector<double>> topic_word;  // K x N
  std::vector<std::vector<double>> doc_topic;   // I x K
  double planted_perplexity = 0.0;
};

// Peaked topics: topic k puts `peak` of its mass on its own block of N/K
// words. Each document has a dominant topic.
PlantedCorpus planted_plsa(std::size_t docs, std::size_t words, std::size_t topics,
                           std::uint64_t seed, double peak = 0.9,
                           std::size_t min_len = 80, std::size_t max_len = 160);

// Heavy-tailed corpus in the style of a newsgroup collection: Zipfian word
// frequencies shared across a handful of topics, many rare words.
Corpus zipf_topic_corpus(std::size_t docs, std::size_t words, std::size_t topics,
                         std::uint64_t seed, std::size_t min_len = 60, std::size_t max_len = 300);

}  // namespace ntm::testing

#endif  // NTM_TESTS_SUPPORT_HPP_
