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

#ifndef NTM_CHECKPOINT_HPP_
#define NTM_CHECKPOINT_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ntm/corpus.hpp"
#include "ntm/model.hpp"

namespace ntm {

// "NTM1" container, little-endian throughout:
//
//   magic "NTM1" | u32 version | model tag "DNTM"/"CNTM"
//   u64 I | u64 N | u64 K | u64 D | u32 flags (bit 0: tied decoder)
//   u32 tensor count, then per tensor:
//     u32 name length | name bytes | u64 rows | u64 cols | f64 data[rows*cols]
//
// I is 0 for C-NTM, which has no per-document parameters.
void save_checkpoint(const Model& model, std::ostream& out);
void save_checkpoint(const Model& model, const std::filesystem::path& path);
std::string checkpoint_bytes(const Model& model);

// Throws FormatError on a bad magic, version, tag, truncation or layout.
Model load_checkpoint(std::istream& in);
Model load_checkpoint(const std::filesystem::path& path);

// Loads and requires a specific model kind (FormatError on a tag mismatch).
Model load_checkpoint(const std::filesystem::path& path, ModelKind expected);

// Throws DataError when the model's dimensions do not fit the corpus: the
// vocabulary size always, and for D-NTM also the document count.
void check_compatible(const Model& model, const Corpus& corpus);

}  // namespace ntm

#endif  // NTM_CHECKPOINT_HPP_
