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

#ifndef NTM_DNTM_HPP_
#define NTM_DNTM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ntm/numcore.hpp"

namespace ntm {

struct DntmConfig {
  std::size_t topics = 0;  // K
  std::size_t dim = 0;     // D
};

// Discrete neural topic model: lookup-table embeddings for documents, words
// and topics, each probability a softmax over embedding dot products.
//
//   p(w_n | d_i)       = softmax_n(y_n . x_i + b_wd[n])          direct head
//   p(w_n | t_k)       = softmax_n(y_n . z_k + b_wt[n])
//   p(t_k | d_i)       = softmax_k(z_k . x_i + b_td[k])
//   p_mix(w_n | d_i)   = sum_k p(w_n | t_k) p(t_k | d_i)         mixture head
//
// The two word biases are separate parameters.
struct DntmParams {
  Matrix doc_embedding;    // I x D, row i is x_i
  Matrix word_embedding;   // N x D, row n is y_n
  Matrix topic_embedding;  // K x D, row k is z_k
  Vector word_bias_direct; // N
  Vector word_bias_topic;  // N
  Vector topic_bias;       // K

  static DntmParams zeros(std::size_t docs, std::size_t words, std::size_t topics,
                          std::size_t dim);

  std::size_t num_docs() const { return static_cast<std::size_t>(doc_embedding.rows()); }
  std::size_t num_words() const { return static_cast<std::size_t>(word_embedding.rows()); }
  std::size_t num_topics() const { return static_cast<std::size_t>(topic_embedding.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(doc_embedding.cols()); }

  // Tensors in checkpoint order.
  std::vector<TensorView> tensors();
  std::vector<ConstTensorView> tensors() const;
};

// One training example: a document index and its normalized counts.
struct DocTarget {
  std::uint32_t doc = 0;
  SparseVector freq;
};

Vector p_word_given_doc_direct(const DntmParams& params, std::size_t doc);
Vector p_word_given_topic(const DntmParams& params, std::size_t topic);
Vector p_topic_given_doc(const DntmParams& params, std::size_t doc);
Vector p_word_given_doc_mixture(const DntmParams& params, std::size_t doc);

// K x N table whose row k is p(. | t_k).
Matrix word_given_topic_table(const DntmParams& params);

// Mean over the batch of CE(f, direct head) + CE(f, mixture head).
double dntm_loss(const DntmParams& params, std::span<const DocTarget> batch);

// Analytic gradient of dntm_loss, congruent to DntmParams. With more than one
// worker the batch is split into contiguous chunks whose partial gradients
// are reduced in chunk order.
DntmParams dntm_grad(const DntmParams& params, std::span<const DocTarget> batch,
                     std::size_t workers = 1);

// Loss and gradient in one pass. `grad` is resized and overwritten.
double dntm_loss_and_grad(const DntmParams& params, std::span<const DocTarget> batch,
                          DntmParams& grad, std::size_t workers = 1);

}  // namespace ntm

#endif  // NTM_DNTM_HPP_
