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

#ifndef NTM_NUMCORE_HPP_
#define NTM_NUMCORE_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace ntm {

// Dense parameter storage. Embedding tables keep one embedding per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Probability floor applied before taking logarithms.
inline constexpr double kProbFloor = 1e-12;

// Sparse real vector with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  double sum() const;
};

// Named, mutable view over one parameter tensor. Vectors are 1 x n.
struct TensorView {
  std::string_view name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<double> data;
};

struct ConstTensorView {
  std::string_view name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<const double> data;
};

inline std::span<double> as_span(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<double> as_span(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
inline std::span<const double> as_span(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Numerically stable softmax (max subtraction). Throws NumericalError on
// non-finite input.
Vector softmax(std::span<const double> logits);
// In-place softmax of every row.
void softmax_rows(Matrix& logits);

// -sum_n target_n * ln(max(predicted_n, kProbFloor)), over target's nonzeros.
double cross_entropy(const SparseVector& target, std::span<const double> predicted);

// Entropy of a sparse distribution, in nats.
double entropy(const SparseVector& p);

Vector relu(std::span<const double> x);

// Entries i.i.d. uniform on [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed);

struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t size, double beta1 = 0.9, double beta2 = 0.999,
                     double epsilon = 1e-8);

  Vector m;
  Vector v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam update of `param` in place.
void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state,
               double lr);
void adam_step(Matrix& param, const Matrix& grad, AdamState& state, double lr);

// Central finite differences (L(p + h e_j) - L(p - h e_j)) / 2h.
std::vector<double> finite_diff_grad(
    const std::function<double(std::span<const double>)>& loss_fn,
    std::span<const double> params, double h = 1e-5);

// Deterministic order-independent-of-threading sum: pairwise reduction.
double pairwise_sum(std::span<const double> values);

}  // namespace ntm

#endif  // NTM_NUMCORE_HPP_
