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

#include <doctest.h>

#include <cmath>

#include "ntm/dntm.hpp"
#include "support.hpp"

using namespace ntm;
using testing::flatten;
using testing::unflatten;

namespace {

std::vector<DocTarget> targets_for(const Corpus& c, std::vector<std::uint32_t> docs) {
  std::vector<DocTarget> out;
  for (auto i : docs) out.push_back({i, normalize(c.doc(i), c.num_words())});
  return out;
}

double max_abs_diff(const Vector& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a(static_cast<Eigen::Index>(i)) - b[i]));
  return m;
}

}  // namespace

TEST_CASE("direct head: zero embeddings give the uniform distribution") {
  auto p = testing::random_dntm(3, 5, 2, 4, 1);
  p.word_embedding.setZero();
  p.word_bias_direct.setZero();
  for (std::size_t i = 0; i < 3; ++i) {
    const Vector d = p_word_given_doc_direct(p, i);
    for (Eigen::Index n = 0; n < 5; ++n) CHECK(d(n) == doctest::Approx(0.2).epsilon(1e-15));
  }
}

TEST_CASE("direct head: two-word softmax by hand") {
  auto p = DntmParams::zeros(1, 2, 1, 1);
  p.doc_embedding(0, 0) = 1.0;
  p.word_embedding(0, 0) = std::log(3.0) - 0.25;
  p.word_bias_direct(0) = 0.25;
  const Vector d = p_word_given_doc_direct(p, 0);
  CHECK(d(0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(d(1) == doctest::Approx(0.25).epsilon(1e-14));

  p.doc_embedding(0, 0) = 2.0;
  const Vector doubled = p_word_given_doc_direct(p, 0);
  CHECK(doubled(0) != doctest::Approx(0.75));
  CHECK_THROWS_AS(p_word_given_doc_direct(p, 1), std::out_of_range);
}

TEST_CASE("word-given-topic head") {
  auto p = testing::random_dntm(2, 3, 3, 2, 5);
  p.topic_embedding.row(0).setZero();
  p.word_bias_topic.setZero();
  const Vector u = p_word_given_topic(p, 0);
  for (Eigen::Index n = 0; n < 3; ++n) CHECK(u(n) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  p.topic_embedding.row(2) = p.topic_embedding.row(1);
  CHECK(p_word_given_topic(p, 1) == p_word_given_topic(p, 2));

  // N=3, D=2 by direct exponentiation.
  auto q = DntmParams::zeros(1, 3, 1, 2);
  q.word_embedding << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  q.topic_embedding << 0.5, -1.0;
  q.word_bias_topic << 0.0, 0.2, -0.3;
  const double e0 = std::exp(0.5), e1 = std::exp(-1.0 + 0.2), e2 = std::exp(-0.5 - 0.3);
  const double z = e0 + e1 + e2;
  const Vector b = p_word_given_topic(q, 0);
  CHECK(b(0) == doctest::Approx(e0 / z).epsilon(1e-14));
  CHECK(b(1) == doctest::Approx(e1 / z).epsilon(1e-14));
  CHECK(b(2) == doctest::Approx(e2 / z).epsilon(1e-14));
  CHECK_THROWS_AS(p_word_given_topic(q, 1), std::out_of_range);
}

TEST_CASE("topic-given-doc head") {
  auto one = testing::random_dntm(2, 3, 1, 2, 8);
  CHECK(p_topic_given_doc(one, 1)(0) == 1.0);

  auto p = testing::random_dntm(2, 3, 4, 2, 9);
  const Vector before = p_topic_given_doc(p, 0);
  p.topic_bias.array() += 17.0;
  CHECK((p_topic_given_doc(p, 0) - before).cwiseAbs().maxCoeff() < 1e-12);

  auto h = DntmParams::zeros(1, 2, 2, 1);
  h.doc_embedding(0, 0) = 2.0;
  h.topic_embedding << 0.5, -0.5;
  h.topic_bias << 0.0, 1.0;
  // logits 1 and 0
  const Vector t = p_topic_given_doc(h, 0);
  CHECK(t(0) == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-14));
  CHECK(t(1) == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-14));
}

TEST_CASE("mixture head") {
  auto k1 = testing::random_dntm(2, 6, 1, 3, 4);
  CHECK(p_word_given_doc_mixture(k1, 1) == p_word_given_topic(k1, 0));

  auto p = testing::random_dntm(2, 6, 3, 3, 6);
  p.topic_bias << 0.0, 800.0, 0.0;
  CHECK(p_topic_given_doc(p, 0)(1) == 1.0);
  CHECK((p_word_given_doc_mixture(p, 0) - p_word_given_topic(p, 1)).cwiseAbs().maxCoeff() < 1e-15);

  auto tiny = testing::random_dntm(1, 2, 2, 2, 12, 1.0);
  const Vector b0 = p_word_given_topic(tiny, 0), b1 = p_word_given_topic(tiny, 1);
  const Vector th = p_topic_given_doc(tiny, 0);
  const Vector mix = p_word_given_doc_mixture(tiny, 0);
  for (Eigen::Index n = 0; n < 2; ++n) {
    CHECK(mix(n) == doctest::Approx(th(0) * b0(n) + th(1) * b1(n)).epsilon(1e-14));
  }
}

TEST_CASE("all heads normalized and match the triple-loop oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto p = testing::random_dntm(4, 5, 3, 3, seed, 1.5);
    for (std::size_t i = 0; i < 4; ++i) {
      const Vector d = p_word_given_doc_direct(p, i);
      const Vector t = p_topic_given_doc(p, i);
      const Vector m = p_word_given_doc_mixture(p, i);
      CHECK(std::abs(d.sum() - 1.0) < 1e-10);
      CHECK(std::abs(t.sum() - 1.0) < 1e-10);
      CHECK(std::abs(m.sum() - 1.0) < 1e-10);
      CHECK(d.minCoeff() >= 0.0);
      CHECK(m.minCoeff() >= 0.0);
      CHECK(max_abs_diff(m, testing::brute_mixture(p, i)) < 1e-12);
      CHECK(max_abs_diff(d, testing::brute_direct(p, i)) < 1e-12);
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const Vector b = p_word_given_topic(p, k);
      CHECK(std::abs(b.sum() - 1.0) < 1e-10);
      CHECK(max_abs_diff(b, testing::brute_word_given_topic(p, k)) < 1e-12);
    }
  }
}

TEST_CASE("loss: exact fit gives twice the entropy") {
  const Corpus c = testing::make_corpus(4, {{{0, 1}, {1, 2}, {2, 3}, {3, 4}}});
  const auto batch = targets_for(c, {0});
  auto p = DntmParams::zeros(1, 4, 1, 2);
  for (std::size_t e = 0; e < 4; ++e) {
    p.word_bias_direct(static_cast<Eigen::Index>(e)) = std::log(batch[0].freq.value[e]);
    p.word_bias_topic(static_cast<Eigen::Index>(e)) = std::log(batch[0].freq.value[e]);
  }
  CHECK(dntm_loss(p, batch) == doctest::Approx(2.0 * entropy(batch[0].freq)).epsilon(1e-13));
}

TEST_CASE("loss: uniform model gives 2 ln N") {
  const Corpus c = testing::random_corpus(6, 9, 2);
  const auto batch = targets_for(c, {0, 1, 2, 3, 4, 5});
  const auto p = DntmParams::zeros(6, 9, 3, 2);
  CHECK(dntm_loss(p, batch) == doctest::Approx(2.0 * std::log(9.0)).epsilon(1e-14));
}

TEST_CASE("loss: scalar evaluation against the oracle") {
  const Corpus c = testing::random_corpus(3, 5, 7);
  const auto batch = targets_for(c, {0, 2});
  const auto p = testing::random_dntm(3, 5, 2, 3, 21);
  double expected = 0.0;
  for (const auto& t : batch) {
    const auto d = testing::brute_direct(p, t.doc);
    const auto m = testing::brute_mixture(p, t.doc);
    for (std::size_t e = 0; e < t.freq.nnz(); ++e) {
      expected -= t.freq.value[e] * (std::log(d[t.freq.index[e]]) + std::log(m[t.freq.index[e]]));
    }
  }
  CHECK(dntm_loss(p, batch) == doctest::Approx(expected / 2.0).epsilon(1e-13));
}

TEST_CASE("gradient matches central finite differences") {
  const Corpus c = testing::random_corpus(5, 7, 3, 3, 12);
  const auto batch = targets_for(c, {0, 2, 3});
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const auto p = testing::random_dntm(5, 7, 3, 4, seed);
    const auto analytic = flatten(dntm_grad(p, batch));
    auto scratch = p;
    const auto fd = finite_diff_grad(
        [&](std::span<const double> theta) {
          unflatten(theta, scratch);
          return dntm_loss(scratch, batch);
        },
        flatten(p));
    CHECK(testing::max_rel_error(analytic, fd) < 1e-4);
  }
}

TEST_CASE("gradient locality: only batch documents get X gradients") {
  const Corpus c = testing::random_corpus(5, 7, 3);
  const auto p = testing::random_dntm(5, 7, 3, 4, 77);
  const auto g = dntm_grad(p, targets_for(c, {0, 2, 3}));
  CHECK(g.doc_embedding.row(1).isZero(0.0));
  CHECK(g.doc_embedding.row(4).isZero(0.0));
  CHECK_FALSE(g.doc_embedding.row(0).isZero(0.0));
  CHECK_FALSE(g.word_bias_topic.isZero(0.0));
}

TEST_CASE("direct-head bias gradient is the mean of p - f") {
  const Corpus c = testing::random_corpus(4, 6, 5);
  const auto batch = targets_for(c, {0, 1, 3});
  const auto p = testing::random_dntm(4, 6, 2, 3, 31);
  const auto g = dntm_grad(p, batch);
  Vector expected = Vector::Zero(6);
  for (const auto& t : batch) {
    expected += p_word_given_doc_direct(p, t.doc);
    for (std::size_t e = 0; e < t.freq.nnz(); ++e) expected(t.freq.index[e]) -= t.freq.value[e];
  }
  expected /= 3.0;
  CHECK((g.word_bias_direct - expected).cwiseAbs().maxCoeff() < 1e-14);

  // At an exact fit of the direct head the bias gradient vanishes.
  const auto one = targets_for(c, {2});
  auto fit = testing::random_dntm(4, 6, 2, 3, 32);
  fit.word_embedding.setZero();
  fit.word_bias_direct.setConstant(-800.0);
  for (std::size_t e = 0; e < one[0].freq.nnz(); ++e) {
    fit.word_bias_direct(one[0].freq.index[e]) = std::log(one[0].freq.value[e]);
  }
  CHECK(dntm_grad(fit, one).word_bias_direct.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("multi-worker gradient agrees with the single-worker one") {
  const Corpus c = testing::random_corpus(12, 20, 9);
  std::vector<std::uint32_t> ids(12);
  for (std::uint32_t i = 0; i < 12; ++i) ids[i] = i;
  const auto batch = targets_for(c, ids);
  const auto p = testing::random_dntm(12, 20, 4, 5, 41);
  DntmParams g1, g3;
  const double l1 = dntm_loss_and_grad(p, batch, g1, 1);
  const double l3 = dntm_loss_and_grad(p, batch, g3, 3);
  CHECK(l1 == doctest::Approx(l3).epsilon(1e-14));
  CHECK(l1 == doctest::Approx(dntm_loss(p, batch)).epsilon(1e-14));
  CHECK(testing::max_rel_error(flatten(g3), flatten(g1)) < 1e-10);
}

TEST_CASE("batch validation") {
  const auto p = DntmParams::zeros(2, 3, 1, 1);
  CHECK_THROWS_AS(dntm_loss(p, {}), std::invalid_argument);
  std::vector<DocTarget> bad{{5, SparseVector{{0}, {1.0}}}};
  CHECK_THROWS_AS(dntm_loss(p, bad), std::out_of_range);
}
