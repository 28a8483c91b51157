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

#ifndef NTM_CLI_HPP_
#define NTM_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ntm/evaluator.hpp"
#include "ntm/trainer.hpp"

namespace ntm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kNumerical = 5,
};

struct IngestOptions {
  std::filesystem::path docword;
  std::filesystem::path vocab;
  std::filesystem::path out;
  std::optional<std::uint64_t> min_count;
};

struct CorpusStats {
  std::size_t docs = 0;
  std::size_t words = 0;
  std::uint64_t tokens = 0;
};

// Loads UCI text files, optionally filters rare words, writes the NTMC cache
// and prints "I=... N=... tokens=...".
CorpusStats cmd_ingest(const IngestOptions& options, std::ostream& out);

struct TrainOptions {
  std::filesystem::path corpus;  // NTMC cache
  TrainConfig config;
  std::filesystem::path out;     // checkpoint; the manifest goes next to it
};

TrainResult cmd_train(const TrainOptions& options, std::ostream& out);

// Writes an untrained checkpoint: Xavier-initialized, or all-zero (which is
// the uniform predictor) when `zero` is set.
struct InitOptions {
  std::filesystem::path corpus;
  TrainConfig config;
  bool zero = false;
  std::filesystem::path out;
};

void cmd_init(const InitOptions& options, std::ostream& out);

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path corpus;
  bool include_doc_prior = false;
  std::optional<std::filesystem::path> json_out;
};

// Prints the perplexity as a single number.
PerplexityResult cmd_eval(const EvalOptions& options, std::ostream& out);

struct TopicsOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path corpus;
  std::size_t top = 20;
  std::filesystem::path out;
};

void cmd_topics(const TopicsOptions& options, std::ostream& out);

struct SweepOptions {
  std::filesystem::path corpus;
  TrainConfig base;  // K and D are taken from the lists below
  std::vector<std::size_t> topics;
  std::vector<std::size_t> dims;
  std::filesystem::path out;  // TSV grid; per-cell artifacts in <out>.cells/
  bool parallel_cells = false;
};

struct SweepCell {
  std::size_t topics = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::optional<double> perplexity;
  std::string error;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // row-major over (topics, dims)
  // Per dimension: pp(K = last) < pp(K = first), when both cells succeeded.
  std::vector<std::optional<bool>> perplexity_drops_with_topics;
};

// Seed of sweep cell (K, D): a named sub-stream of the user seed.
std::uint64_t sweep_cell_seed(std::uint64_t seed, std::size_t topics, std::size_t dim);

SweepResult cmd_sweep(const SweepOptions& options, std::ostream& out);

// Parses argv and dispatches; returns a process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ntm::cli

#endif  // NTM_CLI_HPP_
