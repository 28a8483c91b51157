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

#include "ntm/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "ntm/binary_io.hpp"
#include "ntm/checkpoint.hpp"
#include "ntm/errors.hpp"

namespace ntm {
namespace {

using nlohmann::json;

Matrix topic_table(const Model& model) {
  if (const auto* d = std::get_if<DntmParams>(&model)) return word_given_topic_table(*d);
  return cntm_word_given_topic_table(std::get<CntmParams>(model));
}

double doc_log_likelihood(const SparseDoc& doc, const Vector& theta, const Matrix& table) {
  double ll = 0.0;
  for (const auto& e : doc.entries()) {
    double q = 0.0;
    for (Eigen::Index k = 0; k < table.rows(); ++k) q += theta(k) * table(k, e.word);
    ll += static_cast<double>(e.count) * std::log(std::max(q, kProbFloor));
  }
  return ll;
}

}  // namespace

PerplexityResult perplexity(const Model& model, const Corpus& corpus, bool include_doc_prior) {
  check_compatible(model, corpus);
  const Matrix table = topic_table(model);
  std::vector<double> per_doc(corpus.num_docs());
  for (std::size_t i = 0; i < corpus.num_docs(); ++i) {
    const Vector theta = doc_topics(model, corpus, i);
    per_doc[i] = doc_log_likelihood(corpus.doc(i), theta, table);
  }

  PerplexityResult r;
  r.include_doc_prior = include_doc_prior;
  r.token_count = corpus.num_tokens();
  r.total_log_likelihood = pairwise_sum(per_doc);
  if (include_doc_prior) {
    r.total_log_likelihood -= static_cast<double>(r.token_count) *
                              std::log(static_cast<double>(corpus.num_docs()));
  }
  r.perplexity = std::exp(-r.total_log_likelihood / static_cast<double>(r.token_count));
  return r;
}

std::vector<RankedWord> top_words(const Model& model, std::size_t topic, std::size_t n) {
  if (n == 0) throw std::invalid_argument("top_words: n must be >= 1");
  const Vector dist = std::holds_alternative<DntmParams>(model)
                          ? p_word_given_topic(std::get<DntmParams>(model), topic)
                          : cntm_p_word_given_topic(std::get<CntmParams>(model), topic);
  std::vector<std::uint32_t> ids(static_cast<std::size_t>(dist.size()));
  std::iota(ids.begin(), ids.end(), 0u);
  const std::size_t keep = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (dist(a) != dist(b)) return dist(a) > dist(b);
                      return a < b;
                    });
  std::vector<RankedWord> out(keep);
  for (std::size_t j = 0; j < keep; ++j) out[j] = {ids[j], dist(ids[j])};
  return out;
}

TopicReport make_topic_report(const Model& model, const Vocabulary& vocab, std::size_t n) {
  if (vocab.size() != num_words(model)) {
    throw DataError("vocabulary mismatch: model has N=" + std::to_string(num_words(model)) +
                    ", vocabulary has " + std::to_string(vocab.size()) + " tokens");
  }
  TopicReport report;
  report.model = std::string(to_string(kind_of(model)));
  for (std::size_t k = 0; k < num_topics(model); ++k) {
    TopicReport::Topic topic{k, {}};
    for (const auto& w : top_words(model, k, n)) {
      topic.words.push_back({vocab.token(w.word), w.weight});
    }
    report.topics.push_back(std::move(topic));
  }
  return report;
}

std::string topic_report_json(const TopicReport& report) {
  json topics = json::array();
  for (const auto& t : report.topics) {
    json words = json::array();
    for (const auto& w : t.words) words.push_back({{"token", w.token}, {"weight", w.weight}});
    topics.push_back({{"topic_id", t.topic_id}, {"words", std::move(words)}});
  }
  json doc = {{"schema", kTopicSchema}, {"model", report.model}, {"topics", std::move(topics)}};
  // Tokens are opaque bytes; replace invalid UTF-8 rather than fail.
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

TopicReport parse_topic_report(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("topic export: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kTopicSchema) {
    throw FormatError(std::string("topic export: expected schema ") + kTopicSchema);
  }
  TopicReport report;
  try {
    report.model = doc.at("model").get<std::string>();
    for (const auto& t : doc.at("topics")) {
      TopicReport::Topic topic{t.at("topic_id").get<std::size_t>(), {}};
      for (const auto& w : t.at("words")) {
        topic.words.push_back({w.at("token").get<std::string>(), w.at("weight").get<double>()});
      }
      report.topics.push_back(std::move(topic));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("topic export: ") + e.what());
  }
  return report;
}

void export_topics(const Model& model, const Vocabulary& vocab, std::size_t n,
                   const std::filesystem::path& path) {
  binary::write_file(path, topic_report_json(make_topic_report(model, vocab, n)));
}

Vector doc_topics(const DntmParams& params, std::size_t doc) { return p_topic_given_doc(params, doc); }

Vector doc_topics(const CntmParams& params, std::span<const WordCount> counts) {
  return embed_unseen(params, counts).topics;
}

Vector doc_topics(const Model& model, const Corpus& corpus, std::size_t doc) {
  if (const auto* d = std::get_if<DntmParams>(&model)) return doc_topics(*d, doc);
  const auto& c = std::get<CntmParams>(model);
  return cntm_p_topic_given_doc(c, encode(c, normalize(corpus.doc(doc), corpus.num_words())));
}

}  // namespace ntm
