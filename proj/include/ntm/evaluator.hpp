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

#ifndef NTM_EVALUATOR_HPP_
#define NTM_EVALUATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ntm/corpus.hpp"
#include "ntm/model.hpp"

namespace ntm {

struct PerplexityResult {
  double perplexity = 0.0;
  double total_log_likelihood = 0.0;  // nats
  std::uint64_t token_count = 0;      // sum_i N_i
  bool include_doc_prior = false;
};

// exp(-LL / sum_i N_i) with LL = sum_i sum_n c(n, i) ln p_mix(n | i), the
// mixture taken through the topics for both models. With include_doc_prior
// every token also carries ln(1/I), a uniform document prior.
//
// D-NTM requires the training corpus (same I and N); C-NTM accepts any
// corpus over the same vocabulary. Throws DataError on a mismatch.
PerplexityResult perplexity(const Model& model, const Corpus& corpus,
                            bool include_doc_prior = false);

struct RankedWord {
  std::uint32_t word = 0;
  double weight = 0.0;
};

// Top-n entries of p(. | topic), descending, ties broken by word id.
std::vector<RankedWord> top_words(const Model& model, std::size_t topic, std::size_t n);

struct TopicReport {
  struct Word {
    std::string token;
    double weight = 0.0;
  };
  struct Topic {
    std::size_t topic_id = 0;
    std::vector<Word> words;
  };
  std::string model;  // "dntm" / "cntm"
  std::vector<Topic> topics;
};

inline constexpr const char* kTopicSchema = "ntm-topics/1";

TopicReport make_topic_report(const Model& model, const Vocabulary& vocab, std::size_t n);
// JSON document {"schema": "ntm-topics/1", "model": ..., "topics": [...]}.
std::string topic_report_json(const TopicReport& report);
TopicReport parse_topic_report(const std::string& json_text);
void export_topics(const Model& model, const Vocabulary& vocab, std::size_t n,
                   const std::filesystem::path& path);

// p(t | doc) for a training document of a D-NTM model.
Vector doc_topics(const DntmParams& params, std::size_t doc);
// p(t | doc) for any bag of counts under a C-NTM model.
Vector doc_topics(const CntmParams& params, std::span<const WordCount> counts);
// Either model, for document `doc` of `corpus`.
Vector doc_topics(const Model& model, const Corpus& corpus, std::size_t doc);

}  // namespace ntm

#endif  // NTM_EVALUATOR_HPP_
