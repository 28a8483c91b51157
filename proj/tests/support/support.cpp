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

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ntm/rng.hpp"

namespace ntm::testing {
namespace {

std::vector<std::string> tokens_for(std::size_t n) {
  std::vector<std::string> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back("w" + std::to_string(i));
  return t;
}

void fill_uniform(std::span<double> data, CounterRng& rng, double scale) {
  for (double& v : data) v = rng.uniform(-scale, scale);
}

std::size_t sample(const std::vector<double>& cdf, CounterRng& rng) {
  const double u = rng.uniform() * cdf.back();
  return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  return c;
}

std::vector<double> brute_cntm_topic(const CntmParams& p, const std::vector<double>& x) {
  std::vector<double> logits(p.num_topics());
  for (std::size_t k = 0; k < p.num_topics(); ++k) {
    double s = p.topic_bias(static_cast<Eigen::Index>(k));
    for (std::size_t d = 0; d < p.dim(); ++d) {
      s += p.topic_embedding(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d)) * x[d];
    }
    logits[k] = s;
  }
  return naive_softmax(logits);
}

std::vector<double> brute_model_mixture(const Model& model, const Corpus& corpus, std::size_t doc) {
  if (const auto* d = std::get_if<DntmParams>(&model)) return brute_mixture(*d, doc);
  const auto& c = std::get<CntmParams>(model);
  return brute_cntm_mixture(c, brute_encode(c, normalize(corpus.doc(doc), corpus.num_words())));
}

// Builds a corpus by sampling tokens from per-document mixtures.
Corpus sample_corpus(std::size_t n_words, const std::vector<std::vector<double>>& topic_cdf,
                     const std::vector<std::vector<double>>& doc_topic, CounterRng& rng,
                     std::size_t min_len, std::size_t max_len) {
  std::vector<SparseDoc> docs;
  for (const auto& theta : doc_topic) {
    const auto theta_cdf = cumulative(theta);
    const std::size_t len = min_len + static_cast<std::size_t>(rng.below(max_len - min_len + 1));
    std::vector<WordCount> entries;
    for (std::size_t t = 0; t < len; ++t) {
      const auto k = sample(theta_cdf, rng);
      entries.push_back({static_cast<std::uint32_t>(sample(topic_cdf[k], rng)), 1});
    }
    docs.emplace_back(std::move(entries));
  }
  return Corpus(Vocabulary(tokens_for(n_words)), std::move(docs));
}

std::vector<double> dominant_mixture(std::size_t topics, std::size_t dominant, double weight,
                                     CounterRng& rng) {
  std::vector<double> theta(topics);
  if (topics == 1) return {1.0};
  double rest = 0.0;
  for (std::size_t k = 0; k < topics; ++k) {
    theta[k] = k == dominant ? 0.0 : rng.uniform(0.05, 1.0);
    rest += theta[k];
  }
  for (std::size_t k = 0; k < topics; ++k) {
    theta[k] = k == dominant ? weight : (1.0 - weight) * theta[k] / rest;
  }
  return theta;
}

}  // namespace

Corpus make_corpus(std::size_t n_words,
                   const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& docs) {
  std::vector<SparseDoc> out;
  for (const auto& d : docs) {
    std::vector<WordCount> entries;
    for (auto [w, c] : d) entries.push_back({w, c});
    out.emplace_back(std::move(entries));
  }
  return Corpus(Vocabulary(tokens_for(n_words)), std::move(out));
}

Corpus random_corpus(std::size_t docs, std::size_t words, std::uint64_t seed, std::size_t min_len,
                     std::size_t max_len) {
  CounterRng rng(seed);
  std::vector<std::vector<WordCount>> rows(docs);
  for (std::size_t n = 0; n < words; ++n) rows[n % docs].push_back({static_cast<std::uint32_t>(n), 1});
  for (auto& row : rows) {
    const std::size_t len = min_len + static_cast<std::size_t>(rng.below(max_len - min_len + 1));
    for (std::size_t t = 0; t < len; ++t) {
      row.push_back({static_cast<std::uint32_t>(rng.below(words)), 1});
    }
  }
  std::vector<SparseDoc> out;
  for (auto& row : rows) out.emplace_back(std::move(row));
  return Corpus(Vocabulary(tokens_for(words)), std::move(out));
}

DntmParams random_dntm(std::size_t docs, std::size_t words, std::size_t topics, std::size_t dim,
                       std::uint64_t seed, double scale) {
  auto p = DntmParams::zeros(docs, words, topics, dim);
  CounterRng rng(seed);
  for (auto& t : p.tensors()) fill_uniform(t.data, rng, scale);
  return p;
}

CntmParams random_cntm(std::size_t words, std::size_t topics, std::size_t dim, bool tied,
                       std::uint64_t seed, double scale) {
  auto p = CntmParams::zeros(words, topics, dim, tied);
  CounterRng rng(seed);
  for (auto& t : p.tensors()) fill_uniform(t.data, rng, scale);
  return p;
}

std::vector<double> naive_softmax(const std::vector<double>& logits) {
  std::vector<double> out(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i]);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

std::vector<double> brute_word_given_topic(const DntmParams& p, std::size_t k) {
  std::vector<double> logits(p.num_words());
  for (std::size_t n = 0; n < p.num_words(); ++n) {
    double s = p.word_bias_topic(static_cast<Eigen::Index>(n));
    for (std::size_t d = 0; d < p.dim(); ++d) {
      s += p.word_embedding(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)) *
           p.topic_embedding(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    }
    logits[n] = s;
  }
  return naive_softmax(logits);
}

std::vector<double> brute_topic_given_doc(const DntmParams& p, std::size_t i) {
  std::vector<double> logits(p.num_topics());
  for (std::size_t k = 0; k < p.num_topics(); ++k) {
    double s = p.topic_bias(static_cast<Eigen::Index>(k));
    for (std::size_t d = 0; d < p.dim(); ++d) {
      s += p.topic_embedding(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d)) *
           p.doc_embedding(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    }
    logits[k] = s;
  }
  return naive_softmax(logits);
}

std::vector<double> brute_direct(const DntmParams& p, std::size_t i) {
  std::vector<double> logits(p.num_words());
  for (std::size_t n = 0; n < p.num_words(); ++n) {
    double s = p.word_bias_direct(static_cast<Eigen::Index>(n));
    for (std::size_t d = 0; d < p.dim(); ++d) {
      s += p.word_embedding(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)) *
           p.doc_embedding(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    }
    logits[n] = s;
  }
  return naive_softmax(logits);
}

std::vector<double> brute_mixture(const DntmParams& p, std::size_t i) {
  const auto theta = brute_topic_given_doc(p, i);
  std::vector<double> out(p.num_words(), 0.0);
  for (std::size_t k = 0; k < p.num_topics(); ++k) {
    const auto beta = brute_word_given_topic(p, k);
    for (std::size_t n = 0; n < p.num_words(); ++n) out[n] += beta[n] * theta[k];
  }
  return out;
}

std::vector<double> brute_encode(const CntmParams& p, const SparseVector& f) {
  std::vector<double> x(p.dim());
  for (std::size_t d = 0; d < p.dim(); ++d) {
    double s = p.encoder_bias(static_cast<Eigen::Index>(d));
    for (std::size_t e = 0; e < f.nnz(); ++e) {
      s += p.encoder(static_cast<Eigen::Index>(d), f.index[e]) * f.value[e];
    }
    x[d] = s > 0.0 ? s : 0.0;
  }
  return x;
}

std::vector<double> brute_cntm_mixture(const CntmParams& p, const std::vector<double>& x) {
  const auto theta = brute_cntm_topic(p, x);
  std::vector<double> out(p.num_words(), 0.0);
  for (std::size_t k = 0; k < p.num_topics(); ++k) {
    std::vector<double> logits(p.num_words());
    for (std::size_t n = 0; n < p.num_words(); ++n) {
      double s = p.word_bias_topic(static_cast<Eigen::Index>(n));
      for (std::size_t d = 0; d < p.dim(); ++d) {
        s += p.encoder(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n)) *
             p.topic_embedding(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
      }
      logits[n] = s;
    }
    const auto beta = naive_softmax(logits);
    for (std::size_t n = 0; n < p.num_words(); ++n) out[n] += beta[n] * theta[k];
  }
  return out;
}

double brute_doc_log_likelihood(const Model& model, const Corpus& corpus, std::size_t doc) {
  const auto q = brute_model_mixture(model, corpus, doc);
  std::vector<std::uint32_t> tokens;
  for (const auto& e : corpus.doc(doc).entries()) tokens.insert(tokens.end(), e.count, e.word);
  double ll = 0.0;
  for (auto w : tokens) ll += std::log(q[w]);
  return ll;
}

double brute_perplexity(const Model& model, const Corpus& corpus) {
  double ll = 0.0;
  double tokens = 0.0;
  for (std::size_t i = 0; i < corpus.num_docs(); ++i) {
    ll += brute_doc_log_likelihood(model, corpus, i);
    tokens += static_cast<double>(corpus.doc(i).total());
  }
  return std::exp(-ll / tokens);
}

double max_rel_error(std::span<const double> analytic, std::span<const double> reference) {
  double worst = 0.0;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    worst = std::max(worst, std::abs(analytic[j] - reference[j]) /
                                std::max(1e-8, std::abs(reference[j])));
  }
  return worst;
}

PlantedCorpus planted_plsa(std::size_t docs, std::size_t words, std::size_t topics,
                           std::uint64_t seed, double peak, std::size_t min_len,
                           std::size_t max_len) {
  CounterRng rng(seed);
  PlantedCorpus out{Corpus(Vocabulary({"x"}), {SparseDoc({{0, 1}})}), {}, {}, 0.0};
  const std::size_t block = words / topics;
  for (std::size_t k = 0; k < topics; ++k) {
    std::vector<double> beta(words, (1.0 - peak) / static_cast<double>(words));
    for (std::size_t n = k * block; n < (k + 1) * block; ++n) {
      beta[n] += peak / static_cast<double>(block);
    }
    const double z = std::accumulate(beta.begin(), beta.end(), 0.0);
    for (double& b : beta) b /= z;
    out.topic_word.push_back(std::move(beta));
  }
  for (std::size_t i = 0; i < docs; ++i) {
    out.doc_topic.push_back(dominant_mixture(topics, static_cast<std::size_t>(rng.below(topics)), 0.7, rng));
  }
  std::vector<std::vector<double>> cdfs;
  for (const auto& beta : out.topic_word) cdfs.push_back(cumulative(beta));
  out.corpus = sample_corpus(words, cdfs, out.doc_topic, rng, min_len, max_len);

  double ll = 0.0;
  for (std::size_t i = 0; i < docs; ++i) {
    for (const auto& e : out.corpus.doc(i).entries()) {
      double q = 0.0;
      for (std::size_t k = 0; k < topics; ++k) q += out.doc_topic[i][k] * out.topic_word[k][e.word];
      ll += e.count * std::log(q);
    }
  }
  out.planted_perplexity = std::exp(-ll / static_cast<double>(out.corpus.num_tokens()));
  return out;
}

Corpus zipf_topic_corpus(std::size_t docs, std::size_t words, std::size_t topics,
                         std::uint64_t seed, std::size_t min_len, std::size_t max_len) {
  CounterRng rng(seed);
  const auto owner = shuffled_indices(words, rng);
  std::vector<std::vector<double>> cdfs;
  for (std::size_t k = 0; k < topics; ++k) {
    std::vector<double> beta(words);
    for (std::size_t n = 0; n < words; ++n) {
      beta[n] = std::pow(static_cast<double>(n + 1), -1.1) * (owner[n] % topics == k ? 8.0 : 1.0);
    }
    cdfs.push_back(cumulative(beta));
  }
  std::vector<std::vector<double>> doc_topic;
  for (std::size_t i = 0; i < docs; ++i) {
    doc_topic.push_back(dominant_mixture(topics, static_cast<std::size_t>(rng.below(topics)), 0.8, rng));
  }
  return sample_corpus(words, cdfs, doc_topic, rng, min_len, max_len);
}

}  // namespace ntm::testing
