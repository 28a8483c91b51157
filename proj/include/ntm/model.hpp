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

#ifndef NTM_MODEL_HPP_
#define NTM_MODEL_HPP_

#include <string_view>
#include <variant>

#include "ntm/cntm.hpp"
#include "ntm/dntm.hpp"

namespace ntm {

enum class ModelKind { kDntm, kCntm };

using Model = std::variant<DntmParams, CntmParams>;

ModelKind kind_of(const Model& model);
std::string_view to_string(ModelKind kind);
// Accepts "dntm" / "cntm" (case-insensitive).
ModelKind parse_model_kind(std::string_view text);

std::size_t num_words(const Model& model);
std::size_t num_topics(const Model& model);
std::size_t embedding_dim(const Model& model);
std::size_t parameter_count(const Model& model);

}  // namespace ntm

#endif  // NTM_MODEL_HPP_
