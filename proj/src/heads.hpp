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

#ifndef NTM_SRC_HEADS_HPP_
#define NTM_SRC_HEADS_HPP_

// Output-layer machinery shared by both topic models. Given, for a chunk of
// documents, the logits of the direct word head and of the topic head, plus
// the shared K x N word-given-topic table, evaluates both cross-entropy
// terms and (optionally) backpropagates them to the logits.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "ntm/numcore.hpp"

namespace ntm::detail {

struct HeadsResult {
  double loss_sum = 0.0;  // unscaled sum over the chunk of both CE terms
};

// On entry `direct` (b x N) and `topic` (b x K) hold logits. When
// `topic_table_grad` is non-null they are overwritten with scale * dL/dlogits
// and scale * dL/dp(w|t) is accumulated into *topic_table_grad (K x N);
// otherwise they are overwritten with probabilities.
HeadsResult evaluate_heads(Matrix& direct, Matrix& topic, const Matrix& topic_table,
                           std::span<const SparseVector* const> targets, double scale,
                           Matrix* topic_table_grad);

// Backpropagates dL/dp(w|t) through the row softmaxes: returns dL/dlogits.
Matrix softmax_rows_backward(const Matrix& probs, const Matrix& grad_probs);

// Splits [0, n) into at most `workers` contiguous chunks and runs
// fn(chunk, begin, end) on each, one thread per chunk beyond the first.
void run_chunks(std::size_t n, std::size_t workers,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);
std::size_t chunk_count(std::size_t n, std::size_t workers);

Vector col_sum(const Matrix& m);

}  // namespace ntm::detail

#endif  // NTM_SRC_HEADS_HPP_
