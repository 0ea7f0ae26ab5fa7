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

#include "skewlab/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace skewlab::io {

namespace {

constexpr const char* kFormat = "skewlab.alpha";

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(std::string("field ") + name + " missing");
  return j.at(name);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw Error(std::string("field ") + name + " must be a string");
  return v.get<std::string>();
}

BigInt parse_integer(const std::string& s, const char* name) {
  Rational r = parse_rational(s);
  if (r.get_den() != 1) throw Error(std::string("field ") + name + " must hold integers");
  return r.get_num();
}

cfrac::ContinuedFraction cf_from_json(const Json& j, const char* name) {
  const Json& qs = field(j, "quotients");
  if (!qs.is_array()) throw Error(std::string("field ") + name + ".quotients must be an array");
  std::vector<BigInt> quotients;
  for (const auto& q : qs) {
    if (!q.is_string()) throw Error(std::string("field ") + name + ".quotients must hold strings");
    quotients.push_back(parse_integer(q.get<std::string>(), "quotients"));
  }
  if (quotients.empty()) return {};
  cfrac::ContinuedFraction cf = cfrac::convergents(quotients);
  const Json& cs = field(j, "convergents");
  if (!cs.is_array() || cs.size() != quotients.size()) throw Error("convergent mismatch");
  for (std::size_t n = 1; n <= quotients.size(); ++n) {
    const Json& c = cs[n - 1];
    if (!c.is_string() || parse_rational(c.get<std::string>()) != cf.convergent(n)) {
      throw Error("convergent mismatch");
    }
  }
  return cf;
}

}  // namespace

Json metadata_json(const Metadata& meta) {
  Json j;
  j["tool"] = "skewlab";
  j["version"] = SKEWLAB_VERSION;
  j["command"] = meta.command;
  Json config = Json::object();
  for (const auto& [k, v] : meta.config) config[k] = v;
  j["config"] = std::move(config);
  j["alpha_depth"] = meta.alpha_depth ? Json(*meta.alpha_depth) : Json(nullptr);
  j["seed"] = meta.seed ? Json(std::to_string(*meta.seed)) : Json(nullptr);
  return j;
}

std::string metadata_comment(const Metadata& meta) {
  std::ostringstream out;
  out << "# tool: skewlab\n";
  out << "# version: " << SKEWLAB_VERSION << "\n";
  out << "# command: " << meta.command << "\n";
  for (const auto& [k, v] : meta.config) out << "# config." << k << ": " << v << "\n";
  out << "# alpha_depth: " << (meta.alpha_depth ? std::to_string(*meta.alpha_depth) : "none") << "\n";
  out << "# seed: " << (meta.seed ? std::to_string(*meta.seed) : "none") << "\n";
  return out.str();
}

Json continued_fraction_json(const cfrac::ContinuedFraction& cf) {
  Json j;
  Json qs = Json::array();
  Json cs = Json::array();
  for (std::size_t n = 1; n <= cf.depth(); ++n) {
    qs.push_back(to_string(cf.quotient(n)));
    cs.push_back(to_string(cf.convergent(n)));
  }
  j["quotients"] = std::move(qs);
  j["convergents"] = std::move(cs);
  return j;
}

Json alpha_json(const cfrac::AlphaPair& alpha) {
  Json j;
  j["depth"] = alpha.depth;
  j["cf1"] = continued_fraction_json(alpha.cf1);
  j["cf2"] = continued_fraction_json(alpha.cf2);
  j["value"] = Json::array({to_string(alpha.value[0]), to_string(alpha.value[1])});
  j["radius"] = Json::array({to_string(alpha.radius[0]), to_string(alpha.radius[1])});
  return j;
}

cfrac::AlphaPair alpha_from_json(const Json& j) {
  const Json& depth = field(j, "depth");
  if (!depth.is_number_unsigned()) throw Error("field depth must be a nonnegative integer");
  cfrac::AlphaPair alpha;
  alpha.depth = depth.get<std::size_t>();
  alpha.cf1 = cf_from_json(field(j, "cf1"), "cf1");
  alpha.cf2 = cf_from_json(field(j, "cf2"), "cf2");
  for (const char* name : {"value", "radius"}) {
    const Json& v = field(j, name);
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
      throw Error(std::string("field ") + name + " must hold two rational strings");
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    alpha.value[c] = parse_rational(j["value"][c].get<std::string>());
    alpha.radius[c] = parse_rational(j["radius"][c].get<std::string>());
    if (alpha.radius[c] < 0) throw Error("field radius must be nonnegative");
  }
  if (alpha.cf1.depth() != alpha.depth || alpha.cf2.depth() != alpha.depth) {
    throw Error("field depth disagrees with the quotient lists");
  }
  if (alpha.depth > 0 && (alpha.value[0] != alpha.cf1.value() || alpha.value[1] != alpha.cf2.value())) {
    throw Error("convergent mismatch");
  }
  return alpha;
}

std::string serialize_alpha(const cfrac::AlphaPair& alpha, const Metadata& meta) {
  Json j;
  j["format"] = kFormat;
  j["meta"] = metadata_json(meta);
  j["alpha"] = alpha_json(alpha);
  return j.dump(2) + "\n";
}

cfrac::AlphaPair parse_alpha(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    auto pos = what.find("syntax error");
    std::string reason = pos == std::string::npos ? std::string("malformed JSON") : what.substr(pos);
    throw Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason);
  }
  try {
    if (string_field(j, "format") != kFormat) throw Error("unknown format");
    return alpha_from_json(field(j, "alpha"));
  } catch (const Error& e) {
    // Structural errors have no single position; report the document start.
    throw Error(std::string("line 1, column 1: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

cfrac::AlphaPair load_alpha(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_alpha(text);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve_output(const std::filesystem::path& path) {
  const char* dir = std::getenv("SKEWLAB_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.is_absolute()) return path;
  return std::filesystem::path(dir) / path;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace skewlab::io
