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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "skewlab/cli.hpp"
#include "skewlab/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
  std::string err;
};

// In-process invocation.
Result run_inline(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.status = skewlab::cli::run(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Subprocess invocation of the installed binary; stderr is discarded.
Result run_binary(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("SKEWLAB_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = env + " '" + std::string(bin) + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("skewlab_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_inline({}).status == 2);
  Result unknown = run_inline({"discrepancy", "--alpha", "a.json", "--n-list", "4", "--bogus", "1"});
  CHECK(unknown.status == 2);
  CHECK_FALSE(unknown.err.empty());
  CHECK(run_inline({"construct-alpha"}).status == 2);
  CHECK(run_inline({"--threads", "x", "construct-alpha", "--depth", "2"}).status == 2);
}

TEST_CASE("missing and malformed inputs fail with status 1") {
  TempDir dir;
  Result missing = run_inline({"discrepancy", "--alpha", (dir.path() / "none.json").string(), "--n-list", "4"});
  CHECK(missing.status == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);
  std::ofstream(dir.path() / "bad.json") << "{\n  \"format\": \n";
  Result bad = run_inline({"dimension", "--alpha", (dir.path() / "bad.json").string()});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("line 3, column") != std::string::npos);
  Result zero = run_inline({"construct-alpha", "--depth", "0"});
  CHECK(zero.status == 1);
}

TEST_CASE("every subcommand is byte identical across runs and thread counts") {
  TempDir dir;
  const std::string alpha = (dir.path() / "alpha.json").string();
  Result made = run_binary("construct-alpha --depth 3 --out '" + alpha + "'");
  REQUIRE(made.status == 0);
  const std::string alpha_text = slurp(alpha);
  CHECK(alpha_text.find("\"format\": \"skewlab.alpha\"") != std::string::npos);
  CHECK(run_binary("--threads 8 construct-alpha --depth 3").out == alpha_text);

  const std::vector<std::string> commands{
      "discrepancy --alpha '" + alpha + "' --n-list 4,16,40 --mode exact",
      "discrepancy --alpha '" + alpha + "' --n-list 64,256 --mode grid --grid 128",
      "mixing-scan --alpha '" + alpha + "' --max-gen 1 --n-list 2,5,9",
      "targets --system skew --alpha '" + alpha + "' --delta 1/3 --n0 50 --horizons 100,1000 --ensemble 16 --seed 4",
      "targets --system baseline --alpha '" + alpha + "' --n0 50 --horizons 100,1000 --ensemble 16 --seed 4",
      "dimension --alpha '" + alpha + "' --theta 13/5 --beta 3 --levels 2 --s-grid 1/64",
  };
  for (const auto& cmd : commands) {
    CAPTURE(cmd);
    Result a = run_binary("--threads 1 " + cmd);
    Result b = run_binary("--threads 1 " + cmd);
    Result c = run_binary("--threads 8 " + cmd);
    CHECK(a.status == 0);
    CHECK_FALSE(a.out.empty());
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}

TEST_CASE("output files honor the output directory override") {
  TempDir dir;
  const fs::path alpha = dir.path() / "alpha.json";
  REQUIRE(run_binary("construct-alpha --depth 2 --out '" + alpha.string() + "'").status == 0);
  const std::string env = "SKEWLAB_OUTPUT_DIR='" + dir.path().string() + "'";
  Result r = run_binary("discrepancy --alpha '" + alpha.string() + "' --n-list 8 --out d.csv", env);
  CHECK(r.status == 0);
  const std::string csv = slurp(dir.path() / "d.csv");
  CHECK(csv.find("n,D_n,mode,error_bound\n8,") != std::string::npos);
  CHECK(csv.rfind("# tool: skewlab\n", 0) == 0);
  // Input paths are not redirected.
  Result rel = run_binary("discrepancy --alpha alpha.json --n-list 8", env);
  CHECK(rel.status == 1);
}

TEST_CASE("dimension output reports the certified bounds") {
  TempDir dir;
  const fs::path alpha = dir.path() / "alpha.json";
  REQUIRE(run_inline({"construct-alpha", "--depth", "3", "--out", alpha.string()}).status == 0);
  Result r = run_inline({"dimension", "--alpha", alpha.string()});
  REQUIRE(r.status == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["bounds"]["orbit_limsup"] == "31/16");
  CHECK(j["bounds"]["product"] == "47/16");
  Result shallow = run_inline({"dimension", "--alpha", alpha.string(), "--levels", "3"});
  CHECK(shallow.status == 1);
  CHECK(shallow.err.find("insufficient depth") != std::string::npos);
}
