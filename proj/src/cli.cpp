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

#include "skewlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "skewlab/cfrac.hpp"
#include "skewlab/dimension.hpp"
#include "skewlab/io.hpp"
#include "skewlab/skewprod.hpp"
#include "skewlab/targets.hpp"
#include "skewlab/torus.hpp"

namespace skewlab::cli {

namespace {

using io::Json;

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(std::string("invalid ") + what + ": '" + text + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(const std::vector<std::string>& items, const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& s : items) out.push_back(parse_u64(s, what));
  if (out.empty()) throw Error(std::string("empty ") + what);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

// Decimal rounded toward zero, for values too long to print as p/q.
std::string decimal(const Rational& v, unsigned digits) {
  BigInt scale = big_pow(BigInt(10), digits);
  BigInt scaled = floor_of(v * Rational(scale));
  std::string s = to_string(scaled);
  while (s.size() <= digits) s.insert(s.begin(), '0');
  return s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
}

// Exact p/q when short, otherwise a decimal lower bound flagged with "~".
std::string bc_field(const targets::BcSum& bc) {
  if (bc.exact) {
    std::string s = to_string(bc.lower);
    if (s.size() <= 64) return s;
  }
  return "~" + decimal(bc.lower, 12);
}

// Streams to `out` when no path is given, otherwise to a temporary sibling
// file renamed into place by finish().
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (path.empty()) return;
    path_ = io::resolve_output(path);
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    tmp_ = path_;
    tmp_ += ".tmp";
    file_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error("cannot write " + path_.string());
  }

  std::ostream& stream() { return path_.empty() ? fallback_ : file_; }

  void write(const std::string& content) {
    stream() << content;
    finish();
  }

  void finish() {
    if (path_.empty()) {
      fallback_.flush();
      return;
    }
    file_.close();
    if (!file_) throw Error("cannot write " + path_.string());
    std::filesystem::rename(tmp_, path_);
  }

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream file_;
  std::ostream& fallback_;
};

struct Options {
  unsigned threads = 0;

  std::uint64_t depth = 3;
  std::string seed_a1;
  std::string out;

  std::string alpha;
  std::vector<std::string> n_list;
  std::string mode = "exact";
  std::uint64_t grid = 1024;

  unsigned max_gen = 2;
  std::string s = "1/17";

  std::string system = "skew";
  std::string delta = "1/3";
  std::uint64_t n0 = 1000;
  std::vector<std::string> horizons;
  std::uint64_t ensemble = 1000;
  std::uint64_t seed = 0;

  std::string theta = "13/5";
  std::string beta = "3";
  std::uint64_t levels = 2;
  std::string s_grid = "1/64";
};

void construct_alpha(const Options& o, std::ostream& out) {
  std::optional<BigInt> seed;
  if (!o.seed_a1.empty()) seed = BigInt(parse_u64(o.seed_a1, "seed-a1"));
  cfrac::AlphaPair alpha = cfrac::synthesize_alpha_pair(o.depth, seed);
  if (auto bad = cfrac::check_windows(alpha)) throw Error("synthesized pair fails check: " + *bad);
  io::Metadata meta;
  meta.command = "construct-alpha";
  meta.config = {{"depth", std::to_string(o.depth)}, {"seed_a1", o.seed_a1.empty() ? "2" : o.seed_a1}};
  meta.alpha_depth = alpha.depth;
  Output(o.out, out).write(io::serialize_alpha(alpha, meta));
}

void discrepancy(const Options& o, std::ostream& out) {
  cfrac::AlphaPair alpha = io::load_alpha(o.alpha);
  auto ns = parse_list(o.n_list, "n-list");
  torus::DiscrepancyMode mode;
  if (o.mode == "exact") {
    mode = torus::DiscrepancyMode::exact;
  } else if (o.mode == "grid") {
    mode = torus::DiscrepancyMode::grid;
  } else {
    throw Error("invalid mode '" + o.mode + "'");
  }
  const std::uint64_t N = *std::max_element(ns.begin(), ns.end());
  torus::OrbitTable orbit = torus::rotation_orbit(alpha, N);

  io::Metadata meta;
  meta.command = "discrepancy";
  meta.config = {{"alpha", o.alpha}, {"n_list", join(o.n_list)}, {"mode", o.mode}};
  if (mode == torus::DiscrepancyMode::grid) meta.config.emplace_back("grid", std::to_string(o.grid));
  meta.alpha_depth = alpha.depth;
  std::ostringstream csv;
  csv << io::metadata_comment(meta) << "n,D_n,mode,error_bound\n";
  for (std::uint64_t n : ns) {
    torus::Discrepancy d = torus::rectangle_discrepancy(orbit, n, mode, o.grid, o.threads);
    csv << n << "," << to_string(d.value) << "," << o.mode << "," << to_string(d.error_bound) << "\n";
  }
  Output(o.out, out).write(csv.str());
}

void mixing_scan(const Options& o, std::ostream& out) {
  cfrac::AlphaPair alpha = io::load_alpha(o.alpha);
  skewprod::ScanConfig config;
  config.max_gen = o.max_gen;
  config.n_list = parse_list(o.n_list, "n-list");
  config.s = parse_rational(o.s);
  config.threads = o.threads;

  io::Metadata meta;
  meta.command = "mixing-scan";
  meta.config = {{"alpha", o.alpha}, {"max_gen", std::to_string(o.max_gen)}, {"n_list", join(o.n_list)},
                 {"s", to_string(config.s)}};
  meta.alpha_depth = alpha.depth;
  Output output(o.out, out);
  std::ostream& lines = output.stream();
  lines << Json{{"meta", io::metadata_json(meta)}}.dump() << "\n";
  auto summary = skewprod::mixing_scan(alpha, config, [&](const skewprod::MixingCertificate& c) {
    Json j;
    j["gA"] = c.A.g;
    j["idxA"] = c.A.index();
    j["gB"] = c.B.g;
    j["idxB"] = c.B.index();
    j["n"] = c.n;
    j["measure"] = to_string(c.exact_measure);
    j["product_term"] = to_string(c.product_term);
    j["needed_C"] = to_string(c.needed_C);
    j["exact"] = c.exact;
    lines << j.dump() << "\n";
  });
  Json tail;
  tail["summary"] = {{"c_star", to_string(summary.c_star)},
                     {"certificates", summary.certificates},
                     {"product_dominated", summary.product_dominated},
                     {"approximate", summary.approximate}};
  lines << tail.dump() << "\n";
  output.finish();
}

void targets_cmd(const Options& o, std::ostream& out) {
  cfrac::AlphaPair alpha = io::load_alpha(o.alpha);
  targets::EnsembleConfig config;
  if (o.system == "skew") {
    config.kind = targets::SystemKind::skew;
  } else if (o.system == "baseline") {
    config.kind = targets::SystemKind::baseline;
  } else {
    throw Error("invalid system '" + o.system + "'");
  }
  config.starts = o.ensemble;
  config.seed = o.seed;
  config.horizons = parse_list(o.horizons, "horizons");
  config.threads = o.threads;
  targets::TargetSpec target;
  target.center = targets::default_center();
  target.delta = parse_rational(o.delta);
  target.n0 = o.n0;

  io::Metadata meta;
  meta.command = "targets";
  meta.config = {{"system", o.system},   {"alpha", o.alpha},
                 {"delta", to_string(target.delta)}, {"n0", std::to_string(o.n0)},
                 {"horizons", join(o.horizons)}, {"ensemble", std::to_string(o.ensemble)},
                 {"center", "1/3,1/3,1/3"}};
  meta.alpha_depth = alpha.depth;
  meta.seed = o.seed;
  auto rows = targets::ensemble_fraction(alpha, target, config);
  std::ostringstream csv;
  csv << io::metadata_comment(meta) << "horizon,fraction,mean_hits,bc_partial_sum,boundary_ambiguous_count\n";
  for (const auto& r : rows) {
    csv << r.horizon << "," << to_string(r.fraction) << "," << to_string(r.mean_hits) << "," << bc_field(r.bc)
        << "," << r.ambiguous << "\n";
  }
  Output(o.out, out).write(csv.str());
}

void dimension_cmd(const Options& o, std::ostream& out) {
  cfrac::AlphaPair alpha = io::load_alpha(o.alpha);
  Rational theta = parse_rational(o.theta);
  Rational beta = parse_rational(o.beta);
  Rational step = parse_rational(o.s_grid);
  auto schedule = dimension::build_schedule(alpha, theta, beta, o.levels);
  auto bound = dimension::certify_dimension_bound(schedule, step, o.threads);

  io::Metadata meta;
  meta.command = "dimension";
  meta.config = {{"alpha", o.alpha},
                 {"theta", to_string(theta)},
                 {"beta", to_string(beta)},
                 {"levels", std::to_string(o.levels)},
                 {"s_grid", to_string(step)}};
  meta.alpha_depth = alpha.depth;

  Json j;
  j["meta"] = io::metadata_json(meta);
  Json levels = Json::array();
  for (const auto& lv : schedule.levels) {
    levels.push_back({{"n", lv.n},
                      {"Q_even", to_string(lv.Q_even)},
                      {"P_even", to_string(lv.P_even)},
                      {"Q_odd", to_string(lv.Q_odd)},
                      {"P_odd", to_string(lv.P_odd)},
                      {"Q_next", to_string(lv.Q_next)}});
  }
  j["schedule"] = {{"theta", to_string(theta)}, {"beta", to_string(beta)}, {"levels", std::move(levels)}};
  Json regimes = Json::array();
  for (const auto& rb : bound.regimes) {
    Json r;
    r["regime"] = dimension::regime_name(rb.regime);
    Json cont = Json::array();
    for (bool c : rb.containment) cont.push_back(c);
    r["containment"] = std::move(cont);
    r["certified_s"] = rb.s ? Json(to_string(*rb.s)) : Json(nullptr);
    Json costs = Json::array();
    for (const auto& c : rb.costs) costs.push_back(to_string(c));
    r["costs"] = std::move(costs);
    if (rb.s) {
      r["tail_exponent"] = to_string(dimension::tail_exponent(schedule, rb.regime, *rb.s));
    }
    Json rejected = Json::array();
    for (const auto& s : rb.tested) rejected.push_back(to_string(s));
    r["rejected_s"] = std::move(rejected);
    r["failure"] = rb.failure;
    regimes.push_back(std::move(r));
  }
  j["regimes"] = std::move(regimes);
  j["bounds"] = {{"orbit_limsup", bound.overall ? Json(to_string(*bound.overall)) : Json(nullptr)},
                 {"product", bound.product ? Json(to_string(*bound.product)) : Json(nullptr)}};
  Output(o.out, out).write(j.dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skewlab: exact experiments on a skew product over the doubling map", "skewlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.set_version_flag("--version", SKEWLAB_VERSION);

  auto* ca = app.add_subcommand("construct-alpha", "Synthesize a rotation vector and write it as JSON");
  ca->add_option("--depth", o.depth, "Continued-fraction depth")->required();
  ca->add_option("--seed-a1", o.seed_a1, "First quotient of the first coordinate");
  ca->add_option("--out", o.out, "Output file (default stdout)");

  auto* dc = app.add_subcommand("discrepancy", "Rectangle discrepancy of the rotation orbit");
  dc->add_option("--alpha", o.alpha, "Alpha JSON file")->required();
  dc->add_option("--n-list", o.n_list, "Prefix lengths")->delimiter(',')->required();
  dc->add_option("--mode", o.mode, "exact or grid");
  dc->add_option("--grid", o.grid, "Grid size in grid mode");
  dc->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* ms = app.add_subcommand("mixing-scan", "Mixing certificates for dyadic cube pairs");
  ms->add_option("--alpha", o.alpha, "Alpha JSON file")->required();
  ms->add_option("--max-gen", o.max_gen, "Largest cube generation")->required();
  ms->add_option("--n-list", o.n_list, "Iterates")->delimiter(',')->required();
  ms->add_option("--s", o.s, "Decay exponent p/q");
  ms->add_option("--out", o.out, "Output JSON lines (default stdout)");

  auto* tg = app.add_subcommand("targets", "Shrinking-target hit fractions over an ensemble of starts");
  tg->add_option("--system", o.system, "skew or baseline");
  tg->add_option("--alpha", o.alpha, "Alpha JSON file")->required();
  tg->add_option("--delta", o.delta, "Radius exponent p/q");
  tg->add_option("--n0", o.n0, "First tested iterate");
  tg->add_option("--horizons", o.horizons, "Horizons")->delimiter(',')->required();
  tg->add_option("--ensemble", o.ensemble, "Number of starts");
  tg->add_option("--seed", o.seed, "Master seed");
  tg->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* dm = app.add_subcommand("dimension", "Certified cover-cost bound for the orbit limsup set");
  dm->add_option("--alpha", o.alpha, "Alpha JSON file")->required();
  dm->add_option("--theta", o.theta, "Even block exponent p/q");
  dm->add_option("--beta", o.beta, "Odd block exponent p/q");
  dm->add_option("--levels", o.levels, "Computed levels");
  dm->add_option("--s-grid", o.s_grid, "Grid step for s");
  dm->add_option("--out", o.out, "Output JSON (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SKEWLAB_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (ca->parsed()) construct_alpha(o, out);
    if (dc->parsed()) discrepancy(o, out);
    if (ms->parsed()) mixing_scan(o, out);
    if (tg->parsed()) targets_cmd(o, out);
    if (dm->parsed()) dimension_cmd(o, out);
  } catch (const IndeterminateError& e) {
    err << "error: " << e.what() << "\nhint: deepen alpha (construct-alpha with a larger --depth)\n";
    return kIndeterminate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace skewlab::cli
