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

#include "ntm/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ntm/errors.hpp"
#include "ntm/rng.hpp"

namespace ntm {
namespace {

void softmax_inplace(double* v, std::size_t n) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) throw NumericalError("softmax: non-finite logit");
    hi = std::max(hi, v[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::exp(v[i] - hi);
    total += v[i];
  }
  const double inv = 1.0 / total;
  for (std::size_t i = 0; i < n; ++i) v[i] *= inv;
}

}  // namespace

double SparseVector::sum() const {
  double s = 0.0;
  for (double x : value) s += x;
  return s;
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  Vector out = Eigen::Map<const Vector>(logits.data(), static_cast<Eigen::Index>(logits.size()));
  softmax_inplace(out.data(), logits.size());
  return out;
}

void softmax_rows(Matrix& logits) {
  const auto cols = static_cast<std::size_t>(logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    softmax_inplace(logits.row(r).data(), cols);
  }
}

double cross_entropy(const SparseVector& target, std::span<const double> predicted) {
  double loss = 0.0;
  for (std::size_t j = 0; j < target.nnz(); ++j) {
    const auto n = target.index[j];
    if (n >= predicted.size()) throw std::out_of_range("cross_entropy: index out of range");
    loss -= target.value[j] * std::log(std::max(predicted[n], kProbFloor));
  }
  return loss;
}

double entropy(const SparseVector& p) {
  double h = 0.0;
  for (double x : p.value) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

Vector relu(std::span<const double> x) {
  Vector out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = std::max(0.0, x[i]);
  return out;
}

Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("xavier_init: empty shape");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  CounterRng rng(seed);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.uniform(-bound, bound);
  }
  return m;
}

AdamState::AdamState(std::size_t size, double b1, double b2, double eps)
    : m(Vector::Zero(static_cast<Eigen::Index>(size))),
      v(Vector::Zero(static_cast<Eigen::Index>(size))),
      beta1(b1),
      beta2(b2),
      epsilon(eps) {}

void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state,
               double lr) {
  if (param.size() != grad.size() || static_cast<Eigen::Index>(param.size()) != state.m.size() ||
      state.m.size() != state.v.size()) {
    throw std::invalid_argument("adam_step: shape mismatch (param " +
                                std::to_string(param.size()) + ", grad " +
                                std::to_string(grad.size()) + ", state " +
                                std::to_string(state.m.size()) + ")");
  }
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  double* m = state.m.data();
  double* v = state.v.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
    v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    param[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

void adam_step(Matrix& param, const Matrix& grad, AdamState& state, double lr) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols()) {
    throw std::invalid_argument("adam_step: parameter and gradient shapes differ");
  }
  adam_step(as_span(param), as_span(grad), state, lr);
}

std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> params, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
  std::vector<double> theta(params.begin(), params.end());
  std::vector<double> grad(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double saved = theta[j];
    theta[j] = saved + h;
    const double up = loss_fn(theta);
    theta[j] = saved - h;
    const double down = loss_fn(theta);
    theta[j] = saved;
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace ntm
