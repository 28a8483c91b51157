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

#include "ntm/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ntm/checkpoint.hpp"
#include "ntm/errors.hpp"
#include "ntm/evaluator.hpp"
#include "ntm/rng.hpp"

namespace ntm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Params>
void xavier_fill(Params& p, std::uint64_t seed) {
  for (auto& t : p.tensors()) {
    if (t.name.find("bias") != std::string_view::npos) continue;  // biases stay at zero
    const Matrix init = xavier_init(t.rows, t.cols, derive_seed(seed, "init/" + std::string(t.name)));
    std::copy(init.data(), init.data() + init.size(), t.data.begin());
  }
}

// Optimizer state and the per-step loop for one parameter struct.
template <typename Params>
class Optimizer {
 public:
  Optimizer(Params& params, double lr) : params_(params), lr_(lr) {
    for (const auto& t : params_.tensors()) states_.emplace_back(t.data.size());
  }

  void step(const Params& grad) {
    auto ps = params_.tensors();
    const auto gs = grad.tensors();
    for (std::size_t i = 0; i < ps.size(); ++i) adam_step(ps[i].data, gs[i].data, states_[i], lr_);
  }

 private:
  Params& params_;
  double lr_;
  std::vector<AdamState> states_;
};

}  // namespace

void TrainConfig::validate() const {
  if (topics == 0) throw std::invalid_argument("number of topics K must be >= 1");
  if (dim == 0) throw std::invalid_argument("embedding dimension D must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be > 0");
  if (epochs == 0) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (log_every == 0) throw std::invalid_argument("log_every must be >= 1");
}

Model init_model(const Corpus& corpus, const TrainConfig& config) {
  config.validate();
  if (config.model == ModelKind::kDntm) {
    auto p = DntmParams::zeros(corpus.num_docs(), corpus.num_words(), config.topics, config.dim);
    xavier_fill(p, config.seed);
    return p;
  }
  auto p = CntmParams::zeros(corpus.num_words(), config.topics, config.dim, config.tie_decoder);
  xavier_fill(p, config.seed);
  return p;
}

double corpus_loss(const Model& model, const Corpus& corpus) {
  check_compatible(model, corpus);
  const auto freqs = normalize_all(corpus);
  if (const auto* d = std::get_if<DntmParams>(&model)) {
    std::vector<DocTarget> all(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) all[i] = {static_cast<std::uint32_t>(i), freqs[i]};
    return dntm_loss(*d, all);
  }
  return cntm_loss(std::get<CntmParams>(model), freqs);
}

TrainResult train(const Corpus& corpus, const TrainConfig& config, std::ostream* log) {
  config.validate();
  const auto start = Clock::now();
  TrainResult result{init_model(corpus, config), {}};
  TrainReport& report = result.report;
  report.config = config;
  report.initial_loss = corpus_loss(result.model, corpus);

  const auto freqs = normalize_all(corpus);
  const std::size_t n_docs = corpus.num_docs();
  CounterRng shuffle_rng(derive_seed(config.seed, "shuffle"));

  auto run = [&](auto& params, auto& grad, auto&& loss_and_grad) {
    Optimizer opt(params, config.lr);
    bool capped = false;
    for (std::size_t epoch = 0; epoch < config.epochs && !capped; ++epoch) {
      const auto order = shuffled_indices(n_docs, shuffle_rng);
      double loss_sum = 0.0;
      std::size_t seen = 0;
      for (std::size_t begin = 0; begin < n_docs; begin += config.batch_size) {
        if (config.max_steps != 0 && report.steps == config.max_steps) {
          capped = true;
          break;
        }
        const std::size_t end = std::min(n_docs, begin + config.batch_size);
        const double loss = loss_and_grad(std::span(order).subspan(begin, end - begin), grad);
        if (!std::isfinite(loss)) {
          throw NumericalError("non-finite loss at epoch " + std::to_string(epoch + 1) +
                               ", step " + std::to_string(report.steps + 1));
        }
        opt.step(grad);
        ++report.steps;
        loss_sum += loss * static_cast<double>(end - begin);
        seen += end - begin;
      }
      if (seen == 0) break;
      report.epoch_loss.push_back(loss_sum / static_cast<double>(seen));
      if (log && ((epoch + 1) % config.log_every == 0 || epoch + 1 == config.epochs || capped)) {
        std::ostringstream line;
        line << (epoch + 1) << '\t' << std::setprecision(10) << report.epoch_loss.back() << '\t'
             << std::setprecision(4) << std::fixed << seconds_since(start) << '\n';
        *log << line.str() << std::flush;
      }
    }
  };

  if (auto* d = std::get_if<DntmParams>(&result.model)) {
    DntmParams grad;
    std::vector<DocTarget> batch;
    run(*d, grad, [&](std::span<const std::uint32_t> ids, DntmParams& g) {
      batch.clear();
      for (auto i : ids) batch.push_back({i, freqs[i]});
      return dntm_loss_and_grad(*d, batch, g, config.workers);
    });
  } else {
    auto& c = std::get<CntmParams>(result.model);
    CntmParams grad;
    std::vector<SparseVector> batch;
    run(c, grad, [&](std::span<const std::uint32_t> ids, CntmParams& g) {
      batch.clear();
      for (auto i : ids) batch.push_back(freqs[i]);
      return cntm_loss_and_grad(c, batch, g, config.workers);
    });
  }

  report.final_perplexity = perplexity(result.model, corpus).perplexity;
  report.wall_seconds = seconds_since(start);
  if (config.checkpoint_path) save_checkpoint(result.model, *config.checkpoint_path);
  return result;
}

}  // namespace ntm
