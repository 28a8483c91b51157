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

#include "ntm/dntm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "heads.hpp"

namespace ntm {
namespace {

void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(i) +
                            " out of range [0," + std::to_string(n) + ")");
  }
}

Matrix topic_logits(const DntmParams& p) {
  Matrix logits = p.topic_embedding * p.word_embedding.transpose();
  logits.rowwise() += p.word_bias_topic.transpose();
  return logits;
}

void check_batch(const DntmParams& p, std::span<const DocTarget> batch) {
  if (batch.empty()) throw std::invalid_argument("dntm: empty batch");
  for (const auto& t : batch) {
    check_index(t.doc, p.num_docs(), "document");
    if (!t.freq.index.empty() && t.freq.index.back() >= p.num_words()) {
      throw std::out_of_range("dntm: target word id outside vocabulary");
    }
  }
}

struct ChunkGrad {
  Matrix word_embedding;
  Matrix topic_embedding;
  Vector word_bias_direct;
  Vector topic_bias;
  Matrix doc_rows;  // gradient for the chunk's documents, in chunk order
  Matrix topic_table;
  double loss_sum = 0.0;
};

// Forward (and optionally backward) pass over batch[begin, end).
double run_chunk(const DntmParams& p, std::span<const DocTarget> batch, const Matrix& table,
                 double scale, ChunkGrad* g) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  Matrix xb(b, p.doc_embedding.cols());
  std::vector<const SparseVector*> targets(batch.size());
  for (Eigen::Index j = 0; j < b; ++j) {
    xb.row(j) = p.doc_embedding.row(batch[j].doc);
    targets[j] = &batch[j].freq;
  }
  Matrix direct = xb * p.word_embedding.transpose();
  direct.rowwise() += p.word_bias_direct.transpose();
  Matrix topic = xb * p.topic_embedding.transpose();
  topic.rowwise() += p.topic_bias.transpose();

  const auto res = detail::evaluate_heads(direct, topic, table, targets, scale,
                                          g ? &g->topic_table : nullptr);
  if (g) {
    // direct / topic now hold scaled dL/dlogits.
    g->word_embedding.noalias() += direct.transpose() * xb;
    g->word_bias_direct += detail::col_sum(direct);
    g->topic_embedding.noalias() += topic.transpose() * xb;
    g->topic_bias += detail::col_sum(topic);
    g->doc_rows.noalias() = direct * p.word_embedding;
    g->doc_rows.noalias() += topic * p.topic_embedding;
    g->loss_sum = res.loss_sum;
  }
  return res.loss_sum;
}

}  // namespace

DntmParams DntmParams::zeros(std::size_t docs, std::size_t words, std::size_t topics,
                             std::size_t dim) {
  const auto I = static_cast<Eigen::Index>(docs);
  const auto N = static_cast<Eigen::Index>(words);
  const auto K = static_cast<Eigen::Index>(topics);
  const auto D = static_cast<Eigen::Index>(dim);
  return DntmParams{Matrix::Zero(I, D), Matrix::Zero(N, D), Matrix::Zero(K, D),
                    Vector::Zero(N),    Vector::Zero(N),    Vector::Zero(K)};
}

std::vector<TensorView> DntmParams::tensors() {
  auto view = [](std::string_view name, auto& t, std::size_t rows) {
    return TensorView{name, rows, static_cast<std::size_t>(t.size()) / std::max<std::size_t>(rows, 1),
                      as_span(t)};
  };
  return {
      view("doc_embedding", doc_embedding, static_cast<std::size_t>(doc_embedding.rows())),
      view("word_embedding", word_embedding, static_cast<std::size_t>(word_embedding.rows())),
      view("topic_embedding", topic_embedding, static_cast<std::size_t>(topic_embedding.rows())),
      view("word_bias_direct", word_bias_direct, 1),
      view("word_bias_topic", word_bias_topic, 1),
      view("topic_bias", topic_bias, 1),
  };
}

std::vector<ConstTensorView> DntmParams::tensors() const {
  std::vector<ConstTensorView> out;
  for (const auto& t : const_cast<DntmParams*>(this)->tensors()) {
    out.push_back({t.name, t.rows, t.cols, t.data});
  }
  return out;
}

Vector p_word_given_doc_direct(const DntmParams& p, std::size_t doc) {
  check_index(doc, p.num_docs(), "document");
  Vector logits = p.word_embedding * p.doc_embedding.row(static_cast<Eigen::Index>(doc)).transpose() +
                  p.word_bias_direct;
  return softmax(as_span(logits));
}

Vector p_word_given_topic(const DntmParams& p, std::size_t topic) {
  check_index(topic, p.num_topics(), "topic");
  Vector logits =
      p.word_embedding * p.topic_embedding.row(static_cast<Eigen::Index>(topic)).transpose() +
      p.word_bias_topic;
  return softmax(as_span(logits));
}

Vector p_topic_given_doc(const DntmParams& p, std::size_t doc) {
  check_index(doc, p.num_docs(), "document");
  Vector logits =
      p.topic_embedding * p.doc_embedding.row(static_cast<Eigen::Index>(doc)).transpose() +
      p.topic_bias;
  return softmax(as_span(logits));
}

Matrix word_given_topic_table(const DntmParams& p) {
  Matrix table = topic_logits(p);
  softmax_rows(table);
  return table;
}

Vector p_word_given_doc_mixture(const DntmParams& p, std::size_t doc) {
  const Vector theta = p_topic_given_doc(p, doc);
  const Matrix table = word_given_topic_table(p);
  return table.transpose() * theta;
}

double dntm_loss(const DntmParams& p, std::span<const DocTarget> batch) {
  check_batch(p, batch);
  const Matrix table = word_given_topic_table(p);
  return run_chunk(p, batch, table, 1.0, nullptr) / static_cast<double>(batch.size());
}

double dntm_loss_and_grad(const DntmParams& p, std::span<const DocTarget> batch,
                          DntmParams& grad, std::size_t workers) {
  check_batch(p, batch);
  const auto N = static_cast<Eigen::Index>(p.num_words());
  const auto K = static_cast<Eigen::Index>(p.num_topics());
  const auto D = static_cast<Eigen::Index>(p.dim());
  const double scale = 1.0 / static_cast<double>(batch.size());
  const Matrix table = word_given_topic_table(p);

  const std::size_t chunks = detail::chunk_count(batch.size(), workers);
  std::vector<ChunkGrad> parts(chunks);
  for (auto& part : parts) {
    part.word_embedding = Matrix::Zero(N, D);
    part.topic_embedding = Matrix::Zero(K, D);
    part.word_bias_direct = Vector::Zero(N);
    part.topic_bias = Vector::Zero(K);
    part.topic_table = Matrix::Zero(K, N);
  }
  detail::run_chunks(batch.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    run_chunk(p, batch.subspan(begin, end - begin), table, scale, &parts[c]);
  });

  grad = DntmParams::zeros(p.num_docs(), p.num_words(), p.num_topics(), p.dim());
  double loss_sum = 0.0;
  Matrix table_grad = Matrix::Zero(K, N);
  std::size_t offset = 0;
  for (const auto& part : parts) {
    grad.word_embedding += part.word_embedding;
    grad.topic_embedding += part.topic_embedding;
    grad.word_bias_direct += part.word_bias_direct;
    grad.topic_bias += part.topic_bias;
    table_grad += part.topic_table;
    for (Eigen::Index j = 0; j < part.doc_rows.rows(); ++j) {
      grad.doc_embedding.row(batch[offset + static_cast<std::size_t>(j)].doc) += part.doc_rows.row(j);
    }
    offset += static_cast<std::size_t>(part.doc_rows.rows());
    loss_sum += part.loss_sum;
  }

  // Through the word-given-topic softmaxes into Z, Y and b_wt.
  const Matrix logits_grad = detail::softmax_rows_backward(table, table_grad);
  grad.topic_embedding.noalias() += logits_grad * p.word_embedding;
  grad.word_embedding.noalias() += logits_grad.transpose() * p.topic_embedding;
  grad.word_bias_topic = detail::col_sum(logits_grad);
  return loss_sum * scale;
}

DntmParams dntm_grad(const DntmParams& p, std::span<const DocTarget> batch, std::size_t workers) {
  DntmParams grad;
  dntm_loss_and_grad(p, batch, grad, workers);
  return grad;
}

}  // namespace ntm
