// Copyright 2026 The skewlab Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewlab/cfrac.hpp"

namespace skewlab::io {

using Json = nlohmann::ordered_json;

/// Header carried by every artifact.
struct Metadata {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // echo, in flag order
  std::optional<std::size_t> alpha_depth;
  std::optional<std::uint64_t> seed;
};

/// {"tool", "version", "command", "config", "alpha_depth", "seed"}.
Json metadata_json(const Metadata& meta);

/// "# key: value" lines, one per field.
std::string metadata_comment(const Metadata& meta);

Json continued_fraction_json(const cfrac::ContinuedFraction& cf);
Json alpha_json(const cfrac::AlphaPair& alpha);

/// Inverse of alpha_json. Listed convergents and the deepest values must
/// agree with the quotients. Errors: "field <name> ...", "convergent mismatch".
cfrac::AlphaPair alpha_from_json(const Json& j);

/// Alpha file: {"meta": {...}, "alpha": {...}}, pretty printed, newline terminated.
std::string serialize_alpha(const cfrac::AlphaPair& alpha, const Metadata& meta);

/// Parse failures report "line L, column C: <reason>".
cfrac::AlphaPair parse_alpha(std::string_view text);

std::string read_file(const std::filesystem::path& path);
cfrac::AlphaPair load_alpha(const std::filesystem::path& path);

/// Relative output paths are placed under the directory named by the
/// environment variable SKEWLAB_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& path);

/// Writes atomically enough for our purposes: to a sibling temp file, then renames.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace skewlab::io
