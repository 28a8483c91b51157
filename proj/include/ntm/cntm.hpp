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

#ifndef NTM_CNTM_HPP_
#define NTM_CNTM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ntm/corpus.hpp"
#include "ntm/numcore.hpp"

namespace ntm {

struct CntmConfig {
  std::size_t topics = 0;  // K
  std::size_t dim = 0;     // D
  bool tie_decoder = false;
};

// Continuous neural topic model. Documents are embedded by a ReLU encoder
// over their normalized counts instead of a lookup table:
//
//   x        = relu(Enc f + b_enc)                       D
//   decode   = softmax_n(Dec[:, n] . x + b_dec[n])       reconstruction head
//   p(w|t_k) = softmax_n(Enc[:, n] . z_k + b_wt[n])      encoder columns double
//                                                        as word embeddings
//   p(t|x)   = softmax_k(z_k . x + b_td[k])
//   mixture  = sum_k p(w|t_k) p(t_k|x)
//
// There are no per-document parameters. With a tied decoder `decoder` is
// empty and Enc is used in its place.
struct CntmParams {
  Matrix encoder;          // D x N
  Vector encoder_bias;     // D
  Matrix decoder;          // D x N, or 0 x 0 when tied
  Vector decoder_bias;     // N
  Matrix topic_embedding;  // K x D
  Vector word_bias_topic;  // N
  Vector topic_bias;       // K
  bool tied = false;

  static CntmParams zeros(std::size_t words, std::size_t topics, std::size_t dim, bool tied);

  std::size_t num_words() const { return static_cast<std::size_t>(encoder.cols()); }
  std::size_t num_topics() const { return static_cast<std::size_t>(topic_embedding.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(encoder.rows()); }
  const Matrix& decoder_weights() const { return tied ? encoder : decoder; }

  // Tensors in checkpoint order; the decoder is omitted when tied.
  std::vector<TensorView> tensors();
  std::vector<ConstTensorView> tensors() const;
};

Vector encode(const CntmParams& params, const SparseVector& freq);
Vector decode(const CntmParams& params, const Vector& embedding);
Vector cntm_p_topic_given_doc(const CntmParams& params, const Vector& embedding);
Vector cntm_p_word_given_topic(const CntmParams& params, std::size_t topic);
Vector cntm_mixture(const CntmParams& params, const Vector& embedding);
// K x N table whose row k is p(. | t_k).
Matrix cntm_word_given_topic_table(const CntmParams& params);

// Mean over the batch of CE(f, decode(encode(f))) + CE(f, mixture(encode(f))).
double cntm_loss(const CntmParams& params, std::span<const SparseVector> batch);

// Analytic gradient of cntm_loss. The ReLU derivative at exactly 0 is 0.
CntmParams cntm_grad(const CntmParams& params, std::span<const SparseVector> batch,
                     std::size_t workers = 1);
double cntm_loss_and_grad(const CntmParams& params, std::span<const SparseVector> batch,
                          CntmParams& grad, std::size_t workers = 1);

struct DocEmbedding {
  Vector embedding;  // D
  Vector topics;     // K, p(t | doc)
};

// Normalizes raw counts, encodes, and returns the topic posterior. Words
// outside the vocabulary are ignored; a document with no in-vocabulary
// words is rejected with std::invalid_argument.
DocEmbedding embed_unseen(const CntmParams& params, std::span<const WordCount> counts);

}  // namespace ntm

#endif  // NTM_CNTM_HPP_
