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

#include "ntm/checkpoint.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "ntm/binary_io.hpp"
#include "ntm/errors.hpp"

namespace ntm {
namespace {

constexpr std::string_view kMagic = "NTM1";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kTiedFlag = 1;

void write_tensors(std::ostream& out, const std::vector<ConstTensorView>& tensors) {
  binary::write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    binary::write_u32(out, static_cast<std::uint32_t>(t.name.size()));
    binary::write_bytes(out, t.name);
    binary::write_u64(out, t.rows);
    binary::write_u64(out, t.cols);
    for (double v : t.data) binary::write_f64(out, v);
  }
}

void read_tensors(std::istream& in, std::vector<TensorView> expected) {
  const auto count = binary::read_u32(in, "tensor count");
  if (count != expected.size()) {
    throw FormatError("checkpoint holds " + std::to_string(count) + " tensors, expected " +
                      std::to_string(expected.size()));
  }
  for (auto& t : expected) {
    const auto len = binary::read_u32(in, "tensor name length");
    if (len > 256) throw FormatError("corrupt checkpoint: tensor name too long");
    const auto name = binary::read_bytes(in, len, "tensor name");
    if (name != t.name) {
      throw FormatError("checkpoint tensor '" + name + "' where '" + std::string(t.name) +
                        "' was expected");
    }
    const auto rows = binary::read_u64(in, "tensor rows");
    const auto cols = binary::read_u64(in, "tensor cols");
    if (rows != t.rows || cols != t.cols) {
      throw FormatError("checkpoint tensor '" + name + "' has shape " + std::to_string(rows) +
                        "x" + std::to_string(cols) + ", header implies " +
                        std::to_string(t.rows) + "x" + std::to_string(t.cols));
    }
    for (double& v : t.data) v = binary::read_f64(in, name);
  }
}

}  // namespace

void save_checkpoint(const Model& model, std::ostream& out) {
  binary::write_bytes(out, kMagic);
  binary::write_u32(out, kVersion);
  if (const auto* d = std::get_if<DntmParams>(&model)) {
    binary::write_bytes(out, "DNTM");
    binary::write_u64(out, d->num_docs());
    binary::write_u64(out, d->num_words());
    binary::write_u64(out, d->num_topics());
    binary::write_u64(out, d->dim());
    binary::write_u32(out, 0);
    write_tensors(out, d->tensors());
  } else {
    const auto& c = std::get<CntmParams>(model);
    binary::write_bytes(out, "CNTM");
    binary::write_u64(out, 0);
    binary::write_u64(out, c.num_words());
    binary::write_u64(out, c.num_topics());
    binary::write_u64(out, c.dim());
    binary::write_u32(out, c.tied ? kTiedFlag : 0);
    write_tensors(out, c.tensors());
  }
  if (!out) throw IoError("failed writing checkpoint");
}

std::string checkpoint_bytes(const Model& model) {
  std::ostringstream out;
  save_checkpoint(model, out);
  return std::move(out).str();
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  binary::write_file(path, checkpoint_bytes(model));
}

Model load_checkpoint(std::istream& in) {
  if (binary::read_bytes(in, 4, "checkpoint magic") != kMagic) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  const auto version = binary::read_u32(in, "checkpoint version");
  if (version != kVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto tag = binary::read_bytes(in, 4, "model tag");
  const auto docs = binary::read_u64(in, "I");
  const auto words = binary::read_u64(in, "N");
  const auto topics = binary::read_u64(in, "K");
  const auto dim = binary::read_u64(in, "D");
  const auto flags = binary::read_u32(in, "flags");
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  if (words == 0 || topics == 0 || dim == 0 || words >= kLimit || topics >= kLimit ||
      dim >= kLimit || docs >= kLimit) {
    throw FormatError("corrupt checkpoint: bad dimensions");
  }

  Model model;
  if (tag == "DNTM") {
    if (docs == 0) throw FormatError("corrupt checkpoint: D-NTM with zero documents");
    auto p = DntmParams::zeros(docs, words, topics, dim);
    read_tensors(in, p.tensors());
    model = std::move(p);
  } else if (tag == "CNTM") {
    auto p = CntmParams::zeros(words, topics, dim, (flags & kTiedFlag) != 0);
    read_tensors(in, p.tensors());
    model = std::move(p);
  } else {
    throw FormatError("unknown model tag '" + tag + "'");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("corrupt checkpoint: trailing bytes");
  }
  return model;
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::istringstream in(binary::read_file(path));
  return load_checkpoint(in);
}

Model load_checkpoint(const std::filesystem::path& path, ModelKind expected) {
  Model m = load_checkpoint(path);
  if (kind_of(m) != expected) {
    throw FormatError("checkpoint holds a " + std::string(to_string(kind_of(m))) +
                      " model, expected " + std::string(to_string(expected)));
  }
  return m;
}

void check_compatible(const Model& model, const Corpus& corpus) {
  if (num_words(model) != corpus.num_words()) {
    throw DataError("vocabulary mismatch: model has N=" + std::to_string(num_words(model)) +
                    ", corpus has N=" + std::to_string(corpus.num_words()));
  }
  if (const auto* d = std::get_if<DntmParams>(&model)) {
    if (d->num_docs() != corpus.num_docs()) {
      throw DataError("document mismatch: D-NTM was trained on I=" +
                      std::to_string(d->num_docs()) + " documents, corpus has I=" +
                      std::to_string(corpus.num_docs()));
    }
  }
}

}  // namespace ntm
