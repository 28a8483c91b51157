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

#include "heads.hpp"

#include <cmath>
#include <exception>

namespace ntm::detail {

HeadsResult evaluate_heads(Matrix& direct, Matrix& topic, const Matrix& topic_table,
                           std::span<const SparseVector* const> targets, double scale,
                           Matrix* topic_table_grad) {
  const bool want_grad = topic_table_grad != nullptr;
  const Eigen::Index n_topics = topic_table.rows();
  softmax_rows(direct);
  softmax_rows(topic);

  HeadsResult result;
  Vector grad_theta(n_topics);
  std::vector<double> ratio;
  std::vector<char> clamped;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const SparseVector& f = *targets[j];
    const auto row = static_cast<Eigen::Index>(j);

    // Direct head: CE and dL/dlogits = p * S - f, where S sums the target
    // mass over unclamped entries.
    double mass = 0.0;
    for (std::size_t e = 0; e < f.nnz(); ++e) {
      const double p = direct(row, f.index[e]);
      if (p >= kProbFloor) {
        result.loss_sum -= f.value[e] * std::log(p);
        mass += f.value[e];
      } else {
        result.loss_sum -= f.value[e] * std::log(kProbFloor);
      }
    }
    if (want_grad) {
      auto g = direct.row(row);
      clamped.resize(f.nnz());
      for (std::size_t e = 0; e < f.nnz(); ++e) clamped[e] = g(f.index[e]) < kProbFloor;
      g *= mass * scale;
      for (std::size_t e = 0; e < f.nnz(); ++e) {
        if (!clamped[e]) g(f.index[e]) -= scale * f.value[e];
      }
    }

    // Mixture head, evaluated only on the target's support.
    auto theta = topic.row(row);
    ratio.assign(f.nnz(), 0.0);
    for (std::size_t e = 0; e < f.nnz(); ++e) {
      const auto n = f.index[e];
      double q = 0.0;
      for (Eigen::Index k = 0; k < n_topics; ++k) q += theta(k) * topic_table(k, n);
      if (q >= kProbFloor) {
        result.loss_sum -= f.value[e] * std::log(q);
        ratio[e] = f.value[e] / q;
      } else {
        result.loss_sum -= f.value[e] * std::log(kProbFloor);
      }
    }
    if (want_grad) {
      for (Eigen::Index k = 0; k < n_topics; ++k) {
        double acc = 0.0;
        for (std::size_t e = 0; e < f.nnz(); ++e) acc += ratio[e] * topic_table(k, f.index[e]);
        grad_theta(k) = -acc;
      }
      for (Eigen::Index k = 0; k < n_topics; ++k) {
        const double w = -scale * theta(k);
        for (std::size_t e = 0; e < f.nnz(); ++e) {
          (*topic_table_grad)(k, f.index[e]) += w * ratio[e];
        }
      }
      double dot = 0.0;
      for (Eigen::Index k = 0; k < n_topics; ++k) dot += theta(k) * grad_theta(k);
      for (Eigen::Index k = 0; k < n_topics; ++k) {
        theta(k) = scale * theta(k) * (grad_theta(k) - dot);
      }
    }
  }
  return result;
}

Matrix softmax_rows_backward(const Matrix& probs, const Matrix& grad_probs) {
  Matrix out(probs.rows(), probs.cols());
  for (Eigen::Index k = 0; k < probs.rows(); ++k) {
    const double dot = probs.row(k).dot(grad_probs.row(k));
    out.row(k) = probs.row(k).cwiseProduct(grad_probs.row(k)) -
                 dot * probs.row(k);
  }
  return out;
}

std::size_t chunk_count(std::size_t n, std::size_t workers) {
  return std::max<std::size_t>(1, std::min(n, std::max<std::size_t>(1, workers)));
}

void run_chunks(std::size_t n, std::size_t workers,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = chunk_count(n, workers);
  auto bounds = [&](std::size_t c) { return c * n / chunks; };
  if (chunks == 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    threads.emplace_back([&, c] {
      try {
        fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  try {
    fn(0, bounds(0), bounds(1));
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Vector col_sum(const Matrix& m) { return m.colwise().sum().transpose(); }

}  // namespace ntm::detail
