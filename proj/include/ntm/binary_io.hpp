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

#ifndef NTM_BINARY_IO_HPP_
#define NTM_BINARY_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ntm::binary {

// Little-endian primitives, independent of host byte order.
void write_u32(std::ostream& out, std::uint32_t value);
void write_u64(std::ostream& out, std::uint64_t value);
void write_f64(std::ostream& out, double value);
void write_bytes(std::ostream& out, std::string_view bytes);

// Readers throw FormatError on a short read; `what` names the field.
std::uint32_t read_u32(std::istream& in, std::string_view what);
std::uint64_t read_u64(std::istream& in, std::string_view what);
double read_f64(std::istream& in, std::string_view what);
std::string read_bytes(std::istream& in, std::size_t n, std::string_view what);

// Whole-file helpers. read_file transparently inflates gzip content
// (detected by the 1f 8b magic bytes).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

// 64-bit FNV-1a, used as a content fingerprint in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace ntm::binary

#endif  // NTM_BINARY_IO_HPP_
