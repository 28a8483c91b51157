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

#ifndef NTM_TRAINER_HPP_
#define NTM_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ntm/corpus.hpp"
#include "ntm/model.hpp"

namespace ntm {

struct TrainConfig {
  ModelKind model = ModelKind::kDntm;
  std::size_t topics = 0;  // K
  std::size_t dim = 0;     // D
  bool tie_decoder = false;  // C-NTM only
  double lr = 0.01;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  // Optional cap on the total number of Adam steps; 0 means no cap. An
  // epoch cut short by the cap is still reported.
  std::size_t max_steps = 0;
  std::size_t log_every = 1;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> checkpoint_path;

  // Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean per-document loss of each epoch
  double initial_loss = 0.0;       // full-corpus loss at initialization
  double final_perplexity = 0.0;   // training perplexity of the final model
  double wall_seconds = 0.0;
  std::size_t steps = 0;
  TrainConfig config;
};

struct TrainResult {
  Model model;
  TrainReport report;
};

// Weight matrices are Xavier-initialized from named sub-streams of the seed
// ("init/<tensor>"); bias vectors start at zero.
Model init_model(const Corpus& corpus, const TrainConfig& config);

// Mean loss of `model` over every document of the corpus.
double corpus_loss(const Model& model, const Corpus& corpus);

// Minibatch Adam over seeded per-epoch shuffles, keeping the last partial
// batch. Writes "epoch<TAB>mean_loss<TAB>seconds" lines to `log` every
// config.log_every epochs. Throws NumericalError if a batch loss is not
// finite.
TrainResult train(const Corpus& corpus, const TrainConfig& config, std::ostream* log = nullptr);

}  // namespace ntm

#endif  // NTM_TRAINER_HPP_
