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

#include "ntm/model.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace ntm {

ModelKind kind_of(const Model& model) {
  return std::holds_alternative<DntmParams>(model) ? ModelKind::kDntm : ModelKind::kCntm;
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kDntm ? "dntm" : "cntm";
}

ModelKind parse_model_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "dntm" || lower == "d-ntm") return ModelKind::kDntm;
  if (lower == "cntm" || lower == "c-ntm") return ModelKind::kCntm;
  throw std::invalid_argument("unknown model '" + std::string(text) + "' (expected dntm or cntm)");
}

std::size_t num_words(const Model& model) {
  return std::visit([](const auto& p) { return p.num_words(); }, model);
}

std::size_t num_topics(const Model& model) {
  return std::visit([](const auto& p) { return p.num_topics(); }, model);
}

std::size_t embedding_dim(const Model& model) {
  return std::visit([](const auto& p) { return p.dim(); }, model);
}

std::size_t parameter_count(const Model& model) {
  return std::visit(
      [](const auto& p) {
        std::size_t n = 0;
        for (const auto& t : p.tensors()) n += t.data.size();
        return n;
      },
      model);
}

}  // namespace ntm
