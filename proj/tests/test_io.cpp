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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "skewlab/io.hpp"

using namespace skewlab;
using namespace skewlab::io;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_alpha(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Metadata sample_meta() { return Metadata{"construct-alpha", {{"depth", "2"}}, 2, std::nullopt}; }

}  // namespace

TEST_CASE("alpha files round-trip exactly") {
  for (std::size_t depth : {1, 2, 3}) {
    auto a = cfrac::synthesize_alpha_pair(depth);
    std::string text = serialize_alpha(a, sample_meta());
    auto b = parse_alpha(text);
    CHECK(b.depth == a.depth);
    CHECK(b.value == a.value);
    CHECK(b.radius == a.radius);
    CHECK(b.cf1.quotients() == a.cf1.quotients());
    CHECK(b.cf2.quotients() == a.cf2.quotients());
    CHECK(serialize_alpha(b, sample_meta()) == text);
  }
}

TEST_CASE("metadata rendering") {
  Metadata m{"targets", {{"delta", "1/3"}, {"n0", "1000"}}, 3, 7};
  Json j = metadata_json(m);
  CHECK(j["tool"] == "skewlab");
  CHECK(j["command"] == "targets");
  CHECK(j["config"]["delta"] == "1/3");
  CHECK(j["alpha_depth"] == 3);
  CHECK(j["seed"] == "7");
  std::string c = metadata_comment(m);
  CHECK(c.find("# command: targets\n") != std::string::npos);
  CHECK(c.find("# seed: 7\n") != std::string::npos);
  CHECK(c.find("# config.delta: 1/3\n") != std::string::npos);
  Json k = metadata_json(Metadata{"x", {}, std::nullopt, std::nullopt});
  CHECK(k["seed"].is_null());
}

TEST_CASE("syntax errors carry line and column") {
  std::string msg = message_of("{\n  \"format\": \"skewlab.alpha\",\n  \"alpha\": [1,,2]\n}\n");
  CHECK(msg.rfind("line 3, column ", 0) == 0);
  CHECK(msg.find("syntax error") != std::string::npos);
  CHECK(message_of("").rfind("line 1, column 1: ", 0) == 0);
}

TEST_CASE("structural errors are reported") {
  auto a = cfrac::synthesize_alpha_pair(2);
  Json good = Json::parse(serialize_alpha(a, sample_meta()));

  Json no_alpha = good;
  no_alpha.erase("alpha");
  CHECK(message_of(no_alpha.dump()) == "line 1, column 1: field alpha missing");

  Json wrong_format = good;
  wrong_format["format"] = "other";
  CHECK(message_of(wrong_format.dump()) == "line 1, column 1: unknown format");

  Json bad_depth = good;
  bad_depth["alpha"]["depth"] = 5;
  CHECK(message_of(bad_depth.dump()) == "line 1, column 1: field depth disagrees with the quotient lists");

  Json tampered = good;
  tampered["alpha"]["value"][0] = "1/3";
  CHECK(message_of(tampered.dump()) == "line 1, column 1: convergent mismatch");
}

TEST_CASE("file helpers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "skewlab_io_test";
  fs::remove_all(dir);
  const fs::path file = dir / "nested" / "alpha.json";
  auto a = cfrac::synthesize_alpha_pair(2);
  write_file(file, serialize_alpha(a, sample_meta()));
  CHECK(load_alpha(file).value == a.value);
  CHECK_FALSE(fs::exists(fs::path(file.string() + ".tmp")));
  CHECK_THROWS_WITH_AS(read_file(dir / "missing.json"), ("cannot open " + (dir / "missing.json").string()).c_str(),
                       Error);

  ::setenv("SKEWLAB_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(resolve_output("out.csv") == dir / "out.csv");
  CHECK(resolve_output("/abs/out.csv") == fs::path("/abs/out.csv"));
  ::unsetenv("SKEWLAB_OUTPUT_DIR");
  CHECK(resolve_output("out.csv") == fs::path("out.csv"));
  fs::remove_all(dir);
}
