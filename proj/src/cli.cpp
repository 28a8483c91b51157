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

#include "ntm/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ntm/binary_io.hpp"
#include "ntm/checkpoint.hpp"
#include "ntm/errors.hpp"
#include "ntm/rng.hpp"

namespace ntm::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string fingerprint(const fs::path& path) {
  return "fnv1a64:" + hex64(binary::fnv1a64(binary::read_file(path)));
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

json config_json(const TrainConfig& c) {
  json j = {{"model", std::string(to_string(c.model))},
            {"topics", c.topics},
            {"dim", c.dim},
            {"lr", c.lr},
            {"epochs", c.epochs},
            {"batch", c.batch_size},
            {"seed", c.seed},
            {"max_steps", c.max_steps},
            {"workers", c.workers}};
  if (c.model == ModelKind::kCntm) j["tie_decoder"] = c.tie_decoder;
  return j;
}

fs::path manifest_path(const fs::path& artifact) {
  fs::path p = artifact;
  p += ".manifest.json";
  return p;
}

void write_manifest(const fs::path& artifact, const json& manifest) {
  binary::write_file(manifest_path(artifact), manifest.dump(2) + "\n");
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::size_t workers_from_env() {
  if (const char* env = std::getenv("NTM_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("NTM_WORKERS must be a positive integer, got '") +
                                env + "'");
  }
  return 1;
}

}  // namespace

CorpusStats cmd_ingest(const IngestOptions& o, std::ostream& out) {
  const auto start = Clock::now();
  Corpus corpus = load_uci_bow(o.docword, o.vocab);
  if (o.min_count) corpus = filter_min_count(corpus, *o.min_count);
  save_cache(corpus, o.out);
  const CorpusStats stats{corpus.num_docs(), corpus.num_words(), corpus.num_tokens()};
  out << "I=" << stats.docs << " N=" << stats.words << " tokens=" << stats.tokens << '\n';

  json manifest = {{"command", "ingest"},
                   {"inputs", {{"docword", o.docword.string()}, {"vocab", o.vocab.string()}}},
                   {"min_count", o.min_count ? json(*o.min_count) : json(nullptr)},
                   {"corpus_fingerprint", fingerprint(o.out)},
                   {"stats", {{"I", stats.docs}, {"N", stats.words}, {"tokens", stats.tokens}}},
                   {"artifacts", {{"cache", o.out.string()}}},
                   {"wall_seconds", seconds_since(start)}};
  write_manifest(o.out, manifest);
  return stats;
}

TrainResult cmd_train(const TrainOptions& o, std::ostream& out) {
  o.config.validate();
  const Corpus corpus = load_cache(o.corpus);
  TrainConfig config = o.config;
  config.checkpoint_path = o.out;
  TrainResult result = train(corpus, config, &out);
  out << "# perplexity " << format_number(result.report.final_perplexity) << '\n';

  json manifest = {{"command", "train"},
                   {"config", config_json(config)},
                   {"seed", config.seed},
                   {"corpus", o.corpus.string()},
                   {"corpus_fingerprint", fingerprint(o.corpus)},
                   {"artifacts", {{"checkpoint", o.out.string()}}},
                   {"steps", result.report.steps},
                   {"initial_loss", result.report.initial_loss},
                   {"final_loss", result.report.epoch_loss.empty()
                                      ? json(nullptr)
                                      : json(result.report.epoch_loss.back())},
                   {"training_perplexity", result.report.final_perplexity},
                   {"wall_seconds", result.report.wall_seconds}};
  write_manifest(o.out, manifest);
  return result;
}

void cmd_init(const InitOptions& o, std::ostream& out) {
  const Corpus corpus = load_cache(o.corpus);
  Model model = init_model(corpus, o.config);
  if (o.zero) {
    std::visit(
        [](auto& p) {
          for (auto& t : p.tensors()) std::fill(t.data.begin(), t.data.end(), 0.0);
        },
        model);
  }
  save_checkpoint(model, o.out);
  out << "wrote " << (o.zero ? "zero" : "xavier") << ' ' << to_string(kind_of(model))
      << " checkpoint " << o.out.string() << '\n';
  json manifest = {{"command", "init"},
                   {"config", config_json(o.config)},
                   {"zero", o.zero},
                   {"seed", o.config.seed},
                   {"corpus", o.corpus.string()},
                   {"corpus_fingerprint", fingerprint(o.corpus)},
                   {"artifacts", {{"checkpoint", o.out.string()}}}};
  write_manifest(o.out, manifest);
}

PerplexityResult cmd_eval(const EvalOptions& o, std::ostream& out) {
  const Model model = load_checkpoint(o.checkpoint);
  const Corpus corpus = load_cache(o.corpus);
  const PerplexityResult r = perplexity(model, corpus, o.include_doc_prior);
  out << format_number(r.perplexity) << '\n';
  if (o.json_out) {
    json j = {{"perplexity", r.perplexity},
              {"total_log_likelihood", r.total_log_likelihood},
              {"token_count", r.token_count},
              {"include_doc_prior", r.include_doc_prior},
              {"model", std::string(to_string(kind_of(model)))},
              {"checkpoint", o.checkpoint.string()},
              {"corpus_fingerprint", fingerprint(o.corpus)}};
    binary::write_file(*o.json_out, j.dump(2) + "\n");
  }
  return r;
}

void cmd_topics(const TopicsOptions& o, std::ostream& out) {
  const Model model = load_checkpoint(o.checkpoint);
  const Corpus corpus = load_cache(o.corpus);
  export_topics(model, corpus.vocab(), o.top, o.out);
  out << "wrote " << num_topics(model) << " topics to " << o.out.string() << '\n';
}

std::uint64_t sweep_cell_seed(std::uint64_t seed, std::size_t topics, std::size_t dim) {
  return derive_seed(seed, "cell/K=" + std::to_string(topics) + "/D=" + std::to_string(dim));
}

SweepResult cmd_sweep(const SweepOptions& o, std::ostream& out) {
  if (o.topics.empty() || o.dims.empty()) {
    throw std::invalid_argument("sweep: --topics and --dim lists must be nonempty");
  }
  const auto start = Clock::now();
  const Corpus corpus = load_cache(o.corpus);
  const std::string corpus_fp = fingerprint(o.corpus);
  fs::path cell_dir = o.out;
  cell_dir += ".cells";
  fs::create_directories(cell_dir);

  SweepResult result;
  for (auto k : o.topics) {
    for (auto d : o.dims) result.cells.push_back({k, d, sweep_cell_seed(o.base.seed, k, d), {}, {}});
  }

  auto run_cell = [&](SweepCell& cell) {
    const auto cell_start = Clock::now();
    TrainConfig config = o.base;
    config.topics = cell.topics;
    config.dim = cell.dim;
    config.seed = cell.seed;
    const std::string stem = "K" + std::to_string(cell.topics) + "_D" + std::to_string(cell.dim);
    const fs::path ckpt = cell_dir / (stem + ".ntm");
    config.checkpoint_path = ckpt;
    json manifest = {{"command", "sweep-cell"},
                     {"config", config_json(config)},
                     {"seed", config.seed},
                     {"user_seed", o.base.seed},
                     {"corpus", o.corpus.string()},
                     {"corpus_fingerprint", corpus_fp}};
    try {
      const TrainResult r = train(corpus, config, nullptr);
      cell.perplexity = r.report.final_perplexity;
      manifest["artifacts"] = {{"checkpoint", ckpt.string()}};
      manifest["training_perplexity"] = r.report.final_perplexity;
      manifest["steps"] = r.report.steps;
    } catch (const std::exception& e) {
      cell.error = e.what();
      manifest["error"] = cell.error;
    }
    manifest["wall_seconds"] = seconds_since(cell_start);
    write_manifest(ckpt, manifest);
  };

  if (o.parallel_cells) {
    std::vector<std::future<void>> jobs;
    for (auto& cell : result.cells) jobs.push_back(std::async(std::launch::async, run_cell, std::ref(cell)));
    for (auto& j : jobs) j.get();
  } else {
    for (auto& cell : result.cells) {
      run_cell(cell);
      out << "K=" << cell.topics << " D=" << cell.dim << '\t'
          << (cell.perplexity ? format_number(*cell.perplexity) : "FAILED: " + cell.error) << '\n'
          << std::flush;
    }
  }

  const std::size_t n_dims = o.dims.size();
  auto cell_at = [&](std::size_t ki, std::size_t di) -> const SweepCell& {
    return result.cells[ki * n_dims + di];
  };
  for (std::size_t di = 0; di < n_dims; ++di) {
    const auto& first = cell_at(0, di);
    const auto& last = cell_at(o.topics.size() - 1, di);
    if (o.topics.size() > 1 && first.perplexity && last.perplexity) {
      result.perplexity_drops_with_topics.push_back(*last.perplexity < *first.perplexity);
    } else {
      result.perplexity_drops_with_topics.push_back(std::nullopt);
    }
  }

  std::ostringstream tsv;
  tsv << "K\\D";
  for (auto d : o.dims) tsv << '\t' << d;
  tsv << '\n';
  for (std::size_t ki = 0; ki < o.topics.size(); ++ki) {
    tsv << o.topics[ki];
    for (std::size_t di = 0; di < n_dims; ++di) {
      const auto& c = cell_at(ki, di);
      tsv << '\t' << (c.perplexity ? format_number(*c.perplexity) : "FAILED");
    }
    tsv << '\n';
  }
  tsv << "# pp(K=" << o.topics.back() << ") < pp(K=" << o.topics.front() << ")";
  for (std::size_t di = 0; di < n_dims; ++di) {
    const auto& flag = result.perplexity_drops_with_topics[di];
    tsv << "\tD=" << o.dims[di] << ':' << (flag ? (*flag ? "yes" : "no") : "n/a");
  }
  tsv << '\n';
  binary::write_file(o.out, tsv.str());
  out << tsv.str();

  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"topics", c.topics},
                     {"dim", c.dim},
                     {"seed", c.seed},
                     {"perplexity", c.perplexity ? json(*c.perplexity) : json(nullptr)},
                     {"error", c.error}});
  }
  json manifest = {{"command", "sweep"},
                   {"config", config_json(o.base)},
                   {"seed", o.base.seed},
                   {"topics", o.topics},
                   {"dims", o.dims},
                   {"corpus", o.corpus.string()},
                   {"corpus_fingerprint", corpus_fp},
                   {"cells", std::move(cells)},
                   {"artifacts", {{"grid", o.out.string()}, {"cells", cell_dir.string()}}},
                   {"wall_seconds", seconds_since(start)}};
  write_manifest(o.out, manifest);
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural topic models (D-NTM / C-NTM): ingest, train, evaluate, export."};
  app.require_subcommand(1);

  IngestOptions ingest;
  std::uint64_t min_count = 0;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert UCI bag-of-words files to a corpus cache");
  ingest_cmd->add_option("--docword", ingest.docword, "docword.txt (optionally gzipped)")->required();
  ingest_cmd->add_option("--vocab", ingest.vocab, "vocab.txt (optionally gzipped)")->required();
  ingest_cmd->add_option("--out", ingest.out, "Output corpus cache (NTMC)")->required();
  auto* min_count_opt =
      ingest_cmd->add_option("--min-count", min_count, "Drop words occurring fewer times")
          ->check(CLI::PositiveNumber);

  TrainConfig config;
  std::string model_name;
  std::optional<std::size_t> workers;
  auto add_train_flags = [&](CLI::App* cmd, bool with_kd) {
    cmd->add_option("--model", model_name, "dntm (default) or cntm")
        ->check(CLI::IsMember({"dntm", "cntm"}, CLI::ignore_case));
    if (with_kd) {
      cmd->add_option("--topics", config.topics, "Number of topics K")->required();
      cmd->add_option("--dim", config.dim, "Embedding dimension D")->required();
    }
    cmd->add_option("--lr", config.lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--epochs", config.epochs, "Passes over the corpus")->capture_default_str();
    cmd->add_option("--batch", config.batch_size, "Documents per minibatch")->capture_default_str();
    cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--max-steps", config.max_steps, "Cap on Adam steps (0 = none)");
    cmd->add_option("--log-every", config.log_every, "Log every n epochs")->capture_default_str();
    cmd->add_flag("--tie-decoder", config.tie_decoder, "C-NTM: share encoder and decoder weights");
    cmd->add_option("--workers", workers, "Gradient worker threads (env NTM_WORKERS)");
  };

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a corpus cache");
  train_cmd->add_option("--corpus", train_opts.corpus, "Corpus cache (NTMC)")->required();
  train_cmd->add_option("--out", train_opts.out, "Output checkpoint")->required();
  add_train_flags(train_cmd, true);

  InitOptions init_opts;
  auto* init_cmd = app.add_subcommand("init", "Write an untrained checkpoint (debugging)");
  init_cmd->add_option("--corpus", init_opts.corpus, "Corpus cache (NTMC)")->required();
  init_cmd->add_option("--out", init_opts.out, "Output checkpoint")->required();
  init_cmd->add_flag("--zero", init_opts.zero, "All parameters zero (uniform predictor)");
  add_train_flags(init_cmd, true);

  EvalOptions eval_opts;
  std::string eval_json;
  auto* eval_cmd = app.add_subcommand("eval", "Print training perplexity");
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint)->required();
  eval_cmd->add_option("--corpus", eval_opts.corpus, "Corpus cache (NTMC)")->required();
  eval_cmd->add_flag("--include-doc-prior", eval_opts.include_doc_prior,
                     "Include a uniform p(doc) factor");
  eval_cmd->add_option("--json", eval_json, "Also write the full result as JSON");

  TopicsOptions topics_opts;
  auto* topics_cmd = app.add_subcommand("topics", "Export ranked topic words (ntm-topics/1)");
  topics_cmd->add_option("--checkpoint", topics_opts.checkpoint)->required();
  topics_cmd->add_option("--corpus", topics_opts.corpus, "Corpus cache (NTMC)")->required();
  topics_cmd->add_option("--top", topics_opts.top, "Words per topic")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  topics_cmd->add_option("--out", topics_opts.out, "Output JSON")->required();

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train a K x D grid and tabulate perplexity");
  sweep_cmd->add_option("--corpus", sweep_opts.corpus, "Corpus cache (NTMC)")->required();
  sweep_cmd->add_option("--topics", sweep_opts.topics, "Comma-separated K values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--dim", sweep_opts.dims, "Comma-separated D values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep_opts.out, "Output TSV grid")->required();
  sweep_cmd->add_flag("--parallel-cells", sweep_opts.parallel_cells, "Train cells concurrently");
  add_train_flags(sweep_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!model_name.empty()) config.model = parse_model_kind(model_name);
    config.workers = workers ? *workers : workers_from_env();
    if (config.workers == 0) throw std::invalid_argument("--workers must be >= 1");

    if (*ingest_cmd) {
      if (*min_count_opt) ingest.min_count = min_count;
      cmd_ingest(ingest, out);
    } else if (*train_cmd) {
      train_opts.config = config;
      cmd_train(train_opts, out);
    } else if (*init_cmd) {
      init_opts.config = config;
      cmd_init(init_opts, out);
    } else if (*eval_cmd) {
      if (!eval_json.empty()) eval_opts.json_out = eval_json;
      cmd_eval(eval_opts, out);
    } else if (*topics_cmd) {
      cmd_topics(topics_opts, out);
    } else if (*sweep_cmd) {
      sweep_opts.base = config;
      cmd_sweep(sweep_opts, out);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kFormat;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kFormat;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace ntm::cli
