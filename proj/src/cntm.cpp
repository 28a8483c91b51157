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

#include "ntm/cntm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "heads.hpp"

namespace ntm {
namespace {

void check_freq(const CntmParams& p, const SparseVector& f) {
  if (f.nnz() == 0) throw std::invalid_argument("cntm: empty document");
  if (f.index.back() >= p.num_words()) {
    throw std::invalid_argument("cntm: word id " + std::to_string(f.index.back()) +
                                " outside vocabulary of size " + std::to_string(p.num_words()));
  }
}

void check_embedding(const CntmParams& p, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != p.dim()) {
    throw std::invalid_argument("cntm: embedding has size " + std::to_string(x.size()) +
                                ", expected " + std::to_string(p.dim()));
  }
}

// Pre-activation b_enc + Enc f using the word-major copy of Enc.
void preactivation(const CntmParams& p, const Matrix& encoder_t, const SparseVector& f,
                   Eigen::Ref<Eigen::RowVectorXd> out) {
  out = p.encoder_bias.transpose();
  for (std::size_t e = 0; e < f.nnz(); ++e) {
    out.noalias() += f.value[e] * encoder_t.row(f.index[e]);
  }
}

struct ChunkGrad {
  Matrix encoder_t;  // N x D
  Vector encoder_bias;
  Matrix decoder;  // D x N
  Vector decoder_bias;
  Matrix topic_embedding;
  Vector topic_bias;
  Matrix topic_table;
  double loss_sum = 0.0;
};

double run_chunk(const CntmParams& p, const Matrix& encoder_t, std::span<const SparseVector> batch,
                 const Matrix& table, double scale, ChunkGrad* g) {
  const auto b = static_cast<Eigen::Index>(batch.size());
  Matrix pre(b, p.encoder.rows());
  std::vector<const SparseVector*> targets(batch.size());
  for (Eigen::Index j = 0; j < b; ++j) {
    preactivation(p, encoder_t, batch[j], pre.row(j));
    targets[j] = &batch[j];
  }
  const Matrix xb = pre.cwiseMax(0.0);
  const Matrix& dec = p.decoder_weights();
  Matrix direct = xb * dec;
  direct.rowwise() += p.decoder_bias.transpose();
  Matrix topic = xb * p.topic_embedding.transpose();
  topic.rowwise() += p.topic_bias.transpose();

  const auto res = detail::evaluate_heads(direct, topic, table, targets, scale,
                                          g ? &g->topic_table : nullptr);
  if (!g) return res.loss_sum;

  g->decoder.noalias() += xb.transpose() * direct;
  g->decoder_bias += detail::col_sum(direct);
  g->topic_embedding.noalias() += topic.transpose() * xb;
  g->topic_bias += detail::col_sum(topic);

  Matrix grad_pre = direct * dec.transpose();
  grad_pre.noalias() += topic * p.topic_embedding;
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index d = 0; d < grad_pre.cols(); ++d) {
      if (!(pre(j, d) > 0.0)) grad_pre(j, d) = 0.0;
    }
    const SparseVector& f = batch[j];
    for (std::size_t e = 0; e < f.nnz(); ++e) {
      g->encoder_t.row(f.index[e]).noalias() += f.value[e] * grad_pre.row(j);
    }
  }
  g->encoder_bias += detail::col_sum(grad_pre);
  g->loss_sum = res.loss_sum;
  return res.loss_sum;
}

}  // namespace

CntmParams CntmParams::zeros(std::size_t words, std::size_t topics, std::size_t dim, bool tied) {
  const auto N = static_cast<Eigen::Index>(words);
  const auto K = static_cast<Eigen::Index>(topics);
  const auto D = static_cast<Eigen::Index>(dim);
  CntmParams p;
  p.encoder = Matrix::Zero(D, N);
  p.encoder_bias = Vector::Zero(D);
  p.decoder = tied ? Matrix() : Matrix::Zero(D, N);
  p.decoder_bias = Vector::Zero(N);
  p.topic_embedding = Matrix::Zero(K, D);
  p.word_bias_topic = Vector::Zero(N);
  p.topic_bias = Vector::Zero(K);
  p.tied = tied;
  return p;
}

std::vector<TensorView> CntmParams::tensors() {
  auto mat = [](std::string_view name, Matrix& m) {
    return TensorView{name, static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                      as_span(m)};
  };
  auto vec = [](std::string_view name, Vector& v) {
    return TensorView{name, 1, static_cast<std::size_t>(v.size()), as_span(v)};
  };
  std::vector<TensorView> out{mat("encoder", encoder), vec("encoder_bias", encoder_bias)};
  if (!tied) out.push_back(mat("decoder", decoder));
  out.push_back(vec("decoder_bias", decoder_bias));
  out.push_back(mat("topic_embedding", topic_embedding));
  out.push_back(vec("word_bias_topic", word_bias_topic));
  out.push_back(vec("topic_bias", topic_bias));
  return out;
}

std::vector<ConstTensorView> CntmParams::tensors() const {
  std::vector<ConstTensorView> out;
  for (const auto& t : const_cast<CntmParams*>(this)->tensors()) {
    out.push_back({t.name, t.rows, t.cols, t.data});
  }
  return out;
}

Vector encode(const CntmParams& p, const SparseVector& f) {
  check_freq(p, f);
  Vector pre = p.encoder_bias;
  for (std::size_t e = 0; e < f.nnz(); ++e) pre.noalias() += f.value[e] * p.encoder.col(f.index[e]);
  return relu(as_span(pre));
}

Vector decode(const CntmParams& p, const Vector& x) {
  check_embedding(p, x);
  Vector logits = p.decoder_weights().transpose() * x + p.decoder_bias;
  return softmax(as_span(logits));
}

Vector cntm_p_topic_given_doc(const CntmParams& p, const Vector& x) {
  check_embedding(p, x);
  Vector logits = p.topic_embedding * x + p.topic_bias;
  return softmax(as_span(logits));
}

Vector cntm_p_word_given_topic(const CntmParams& p, std::size_t topic) {
  if (topic >= p.num_topics()) {
    throw std::out_of_range("topic index " + std::to_string(topic) + " out of range [0," +
                            std::to_string(p.num_topics()) + ")");
  }
  Vector logits = p.encoder.transpose() *
                      p.topic_embedding.row(static_cast<Eigen::Index>(topic)).transpose() +
                  p.word_bias_topic;
  return softmax(as_span(logits));
}

Matrix cntm_word_given_topic_table(const CntmParams& p) {
  Matrix table = p.topic_embedding * p.encoder;
  table.rowwise() += p.word_bias_topic.transpose();
  softmax_rows(table);
  return table;
}

Vector cntm_mixture(const CntmParams& p, const Vector& x) {
  const Vector theta = cntm_p_topic_given_doc(p, x);
  return cntm_word_given_topic_table(p).transpose() * theta;
}

double cntm_loss(const CntmParams& p, std::span<const SparseVector> batch) {
  if (batch.empty()) throw std::invalid_argument("cntm: empty batch");
  for (const auto& f : batch) check_freq(p, f);
  const Matrix encoder_t = p.encoder.transpose();
  const Matrix table = cntm_word_given_topic_table(p);
  return run_chunk(p, encoder_t, batch, table, 1.0, nullptr) / static_cast<double>(batch.size());
}

double cntm_loss_and_grad(const CntmParams& p, std::span<const SparseVector> batch,
                          CntmParams& grad, std::size_t workers) {
  if (batch.empty()) throw std::invalid_argument("cntm: empty batch");
  for (const auto& f : batch) check_freq(p, f);
  const auto N = static_cast<Eigen::Index>(p.num_words());
  const auto K = static_cast<Eigen::Index>(p.num_topics());
  const auto D = static_cast<Eigen::Index>(p.dim());
  const double scale = 1.0 / static_cast<double>(batch.size());
  const Matrix encoder_t = p.encoder.transpose();
  const Matrix table = cntm_word_given_topic_table(p);

  const std::size_t chunks = detail::chunk_count(batch.size(), workers);
  std::vector<ChunkGrad> parts(chunks);
  for (auto& part : parts) {
    part.encoder_t = Matrix::Zero(N, D);
    part.encoder_bias = Vector::Zero(D);
    part.decoder = Matrix::Zero(D, N);
    part.decoder_bias = Vector::Zero(N);
    part.topic_embedding = Matrix::Zero(K, D);
    part.topic_bias = Vector::Zero(K);
    part.topic_table = Matrix::Zero(K, N);
  }
  detail::run_chunks(batch.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    run_chunk(p, encoder_t, batch.subspan(begin, end - begin), table, scale, &parts[c]);
  });

  grad = CntmParams::zeros(p.num_words(), p.num_topics(), p.dim(), p.tied);
  Matrix encoder_t_grad = Matrix::Zero(N, D);
  Matrix decoder_grad = Matrix::Zero(D, N);
  Matrix table_grad = Matrix::Zero(K, N);
  double loss_sum = 0.0;
  for (const auto& part : parts) {
    encoder_t_grad += part.encoder_t;
    grad.encoder_bias += part.encoder_bias;
    decoder_grad += part.decoder;
    grad.decoder_bias += part.decoder_bias;
    grad.topic_embedding += part.topic_embedding;
    grad.topic_bias += part.topic_bias;
    table_grad += part.topic_table;
    loss_sum += part.loss_sum;
  }
  grad.encoder = encoder_t_grad.transpose();
  if (p.tied) {
    grad.encoder += decoder_grad;
  } else {
    grad.decoder = std::move(decoder_grad);
  }

  // Encoder columns act as word embeddings in the word-given-topic head.
  const Matrix logits_grad = detail::softmax_rows_backward(table, table_grad);
  grad.topic_embedding.noalias() += logits_grad * p.encoder.transpose();
  grad.encoder.noalias() += p.topic_embedding.transpose() * logits_grad;
  grad.word_bias_topic = detail::col_sum(logits_grad);
  return loss_sum * scale;
}

CntmParams cntm_grad(const CntmParams& p, std::span<const SparseVector> batch,
                     std::size_t workers) {
  CntmParams grad;
  cntm_loss_and_grad(p, batch, grad, workers);
  return grad;
}

DocEmbedding embed_unseen(const CntmParams& p, std::span<const WordCount> counts) {
  std::vector<WordCount> kept;
  for (const auto& c : counts) {
    if (c.word < p.num_words() && c.count > 0) kept.push_back(c);
  }
  if (kept.empty()) {
    throw std::invalid_argument("embed_unseen: document has no in-vocabulary words");
  }
  const SparseVector f = normalize(SparseDoc(std::move(kept)), p.num_words());
  DocEmbedding out;
  out.embedding = encode(p, f);
  out.topics = cntm_p_topic_given_doc(p, out.embedding);
  return out;
}

}  // namespace ntm
