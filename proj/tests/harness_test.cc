// Copyright 2026 The Equitable Authors.
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"

#include "equitable/graph_io.h"
#include "equitable/harness.h"

using namespace equitable;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "equitable");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("equitable_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("sample command") {
  const fs::path dir = scratch("sample");
  write_file(dir / "model.txt", "sizes = 100 100\nrow = 2 1\nrow = 1 2\n");
  write_file(dir / "bad.txt", "sizes = 4 4\nrow = 1 2\nrow = 3 1\n");
  write_file(dir / "dense.txt", "sizes = 60\nrow = 59\n");

  auto run = cli({"sample", "--model", (dir / "model.txt").string(), "--seed", "3",
                  "--out", (dir / "a.txt").string()});
  REQUIRE(run.code == 0);
  const std::string first = slurp(dir / "a.txt");
  CHECK(first.rfind("# n=200 m=2\n# labels=", 0) == 0);
  const Graph g = load_graph((dir / "a.txt").string());
  CHECK(verify_equitable(g, load_model((dir / "model.txt").string())));

  cli({"sample", "--model", (dir / "model.txt").string(), "--seed", "3", "--out",
       (dir / "b.txt").string()});
  CHECK(slurp(dir / "b.txt") == first);

  run = cli({"sample", "--model", (dir / "bad.txt").string(), "--out", (dir / "c.txt").string()});
  CHECK(run.code == 2);
  CHECK(run.err.find("edge balance 4*2 != 4*3") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "c.txt"));

  run = cli({"sample", "--model", (dir / "dense.txt").string(), "--out", (dir / "d.txt").string()});
  CHECK(run.code == 3);

  run = cli({"sample", "--model", (dir / "model.txt").string(), "--shuffle", "--out",
             (dir / "s.txt").string()});
  CHECK(run.code == 0);
  CHECK(slurp(dir / "s.txt") != first);

  CHECK(cli({"sample"}).code == 1);
  CHECK(cli({"sample", "--model", (dir / "missing.txt").string()}).code == 2);
}

TEST_CASE("default output directory comes from the environment") {
  const fs::path dir = scratch("env");
  write_file(dir / "model.txt", "sizes = 10 10\nrow = 2 1\nrow = 1 2\n");
  ::setenv("EQUITABLE_OUTPUT_DIR", dir.c_str(), 1);
  const auto run = cli({"sample", "--model", (dir / "model.txt").string(), "--seed", "9"});
  ::unsetenv("EQUITABLE_OUTPUT_DIR");
  CHECK(run.code == 0);
  CHECK(fs::exists(dir / "graph_seed9.txt"));
}

TEST_CASE("spectrum command writes all three curves") {
  const fs::path dir = scratch("spectrum");
  write_file(dir / "model.txt", "sizes = 200 200\nrow = 2 1\nrow = 1 2\n");
  const auto run = cli({"spectrum", "--model", (dir / "model.txt").string(), "--samples", "5",
                        "--epsilon", "1e-3", "--out", (dir / "s.csv").string()});
  REQUIRE(run.code == 0);
  const auto lines = csv_lines(slurp(dir / "s.csv"));
  REQUIRE(lines.size() > 10);
  CHECK(lines[0] == "lambda,rho_cavity,rho_kesten_mckay,rho_empirical");
  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "s.csv.manifest.json"));
  CHECK(manifest["cells"].size() == 5);
  CHECK(manifest["kind"] == "spectrum");

  SpectrumOptions options;
  options.model = BlockModel::Modular(400, 2, 1);
  options.seeds = seed_range(1, 5);
  const SpectrumResult result = run_spectrum(options);
  double area = 0.0, gap = 0.0;
  for (const auto& row : result.rows) {
    area += row.rho_empirical * result.bin_width;
    REQUIRE(row.rho_kesten_mckay.has_value());
    gap = std::max(gap, std::abs(row.rho_cavity - *row.rho_kesten_mckay));
  }
  CHECK(area == doctest::Approx(1.0));
  CHECK(gap < 0.05);
  CHECK(result.eigenvalues.size() == 2000);
}

TEST_CASE("spectrum of the empty model sits at zero") {
  SpectrumOptions options;
  options.model = {{4}, {{0}}};
  options.seeds = seed_range(1, 2);
  const SpectrumResult result = run_spectrum(options);
  double mass_at_zero = 0.0;
  for (const auto& row : result.rows) {
    CHECK_FALSE(row.rho_kesten_mckay.has_value());
    if (row.lambda > 0.0 && row.lambda < result.bin_width) mass_at_zero = row.rho_empirical * result.bin_width;
  }
  CHECK(mass_at_zero == doctest::Approx(1.0));
  std::ostringstream csv;
  write_spectrum_csv(csv, result);
  CHECK(csv.str().find(",,") != std::string::npos);
}

TEST_CASE("partition command") {
  const fs::path dir = scratch("partition");
  write_file(dir / "model.txt", "sizes = 512 512\nrow = 6 3\nrow = 3 6\n");
  REQUIRE(cli({"sample", "--model", (dir / "model.txt").string(), "--seed", "2", "--out",
               (dir / "g.txt").string()}).code == 0);

  auto run = cli({"partition", "--graph", (dir / "g.txt").string(), "--method", "iprSearch",
                  "--overlap", "--ipr-out", (dir / "ipr.csv").string()});
  CHECK(run.code == 0);
  CHECK(run.out.find("method = iprSearch\n") != std::string::npos);
  CHECK(run.out.find("overlap = 1\n") != std::string::npos);
  const auto ipr_lines = csv_lines(slurp(dir / "ipr.csv"));
  CHECK(ipr_lines[0] == "lambda,ipr");
  CHECK(ipr_lines.size() == 1025);

  run = cli({"partition", "--graph", (dir / "g.txt").string(), "--method", "naive",
             "--overlap", "--out", (dir / "naive.txt").string()});
  CHECK(run.code == 0);
  const std::string text = slurp(dir / "naive.txt");
  const auto pos = text.find("overlap = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(text.substr(pos + 10)) < 0.3);

  // Strip the labels line.
  std::ostringstream unlabelled;
  for (const auto& line : csv_lines(slurp(dir / "g.txt")))
    if (line.rfind("# labels", 0) != 0) unlabelled << line << '\n';
  write_file(dir / "nolabels.txt", unlabelled.str());
  run = cli({"partition", "--graph", (dir / "nolabels.txt").string(), "--overlap"});
  CHECK(run.code == 2);
  CHECK(run.err.find("no ground truth") != std::string::npos);
  CHECK(cli({"partition", "--graph", (dir / "nolabels.txt").string()}).code == 0);

  write_file(dir / "flat.txt", "sizes = 256 256\nrow = 3 3\nrow = 3 3\n");
  cli({"sample", "--model", (dir / "flat.txt").string(), "--out", (dir / "flat_g.txt").string()});
  run = cli({"partition", "--graph", (dir / "flat_g.txt").string(), "--method", "iprSearch"});
  CHECK(run.code == 4);
  CHECK(run.out.find("degenerate = true") != std::string::npos);
}

TEST_CASE("delta-scaling command") {
  const fs::path dir = scratch("delta");
  const std::string out = (dir / "d.csv").string();
  auto run = cli({"delta-scaling", "--c", "9", "--r", "2", "--sizes", "64", "--seeds", "1",
                  "--out", out});
  REQUIRE(run.code == 0);
  auto lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "size,meanDelta,sdDelta,samples");
  CHECK(lines[1].rfind("64,", 0) == 0);
  CHECK(lines[1].find(",0,1") != std::string::npos);

  run = cli({"delta-scaling", "--sizes", "64,128", "--seeds", "3", "--out", out});
  REQUIRE(run.code == 0);
  const std::string first = slurp(out);
  lines = csv_lines(first);
  REQUIRE(lines.size() == 3);
  nlohmann::json manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  std::set<std::string> ids;
  for (const auto& cell : manifest["cells"]) {
    CHECK(cell["status"] == "ok");
    ids.insert(cell["id"].get<std::string>());
  }
  for (int n : {64, 128})
    for (int s = 1; s <= 3; ++s) CHECK(ids.count(cell_id(n, s)) == 1);

  // Rerun from scratch and with resume: identical bytes.
  run = cli({"delta-scaling", "--sizes", "64,128", "--seeds", "3", "--out", out});
  CHECK(slurp(out) == first);
  run = cli({"delta-scaling", "--sizes", "64,128", "--seeds", "3", "--out", out, "--resume"});
  CHECK(run.code == 0);
  CHECK(slurp(out) == first);

  CHECK(cli({"delta-scaling", "--c", "10", "--r", "2", "--sizes", "64", "--out", out}).code == 2);
}

TEST_CASE("resume restores only matching configurations") {
  const fs::path dir = scratch("resume");
  const std::string path = (dir / "m.json").string();
  RunManifest a(ExperimentKind::kDeltaScaling, {{"c", 9}});
  a.record("n=64,seed=1", "ok", {{"delta", 0.5}});
  a.record("n=64,seed=2", "failed: boom");
  a.save(path);

  RunManifest same(ExperimentKind::kDeltaScaling, {{"c", 9}});
  CHECK(same.restore(path) == 1);
  REQUIRE(same.completed("n=64,seed=1") != nullptr);
  CHECK(same.completed("n=64,seed=1")->at("delta") == 0.5);
  CHECK(same.completed("n=64,seed=2") == nullptr);

  RunManifest other(ExperimentKind::kDeltaScaling, {{"c", 8}});
  CHECK(other.restore(path) == 0);
  RunManifest missing(ExperimentKind::kDeltaScaling, {{"c", 9}});
  CHECK(missing.restore((dir / "none.json").string()) == 0);
}

TEST_CASE("threshold-sweep command") {
  const fs::path dir = scratch("sweep");
  const std::string out = (dir / "t.csv").string();
  const auto run = cli({"threshold-sweep", "--c", "12", "--r", "1,2,4,5", "--n", "256",
                        "--seeds", "3", "--out", out});
  REQUIRE(run.code == 0);
  const auto lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 7);  // header + 3 feasible r values x 2 methods
  CHECK(lines[0] == "c,r,c_in,c_out,method,meanOverlap,r_c,degenerate,samples");

  ThresholdSweepOptions options{{12}, {1, 2, 5}, 256, seed_range(1, 3)};
  RunManifest manifest(ExperimentKind::kThresholdSweep, {});
  const auto rows = run_threshold_sweep(options, &manifest);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.critical_ratio.has_value());
    CHECK(row.samples == 3);
    if (row.r == 1.0 && row.method == Method::kIprSearch) CHECK(row.degenerate == 3);
    if (row.r > 1.0 && row.method == Method::kIprSearch) CHECK(row.mean_overlap == 1.0);
    if (row.r == 5.0 && row.method == Method::kNaive) CHECK(row.mean_overlap == 1.0);
    if (row.r == 2.0 && row.method == Method::kNaive) CHECK(row.mean_overlap < 0.5);
  }
  CHECK(manifest.cell_count() == 9);

  // Infeasible (c, r) pairs are recorded as skipped.
  RunManifest skipped(ExperimentKind::kThresholdSweep, {});
  run_threshold_sweep({{12}, {4}, 256, seed_range(1, 1)}, &skipped);
  CHECK(skipped.has_cell("c=12,r=4"));
}

TEST_CASE("modular_from_ratio") {
  const auto model = modular_from_ratio(1024, 9, 2.0);
  REQUIRE(model.has_value());
  CHECK(model->connectivity == ConnectivityMatrix{{6, 3}, {3, 6}});
  CHECK_FALSE(modular_from_ratio(1024, 9, 3.0).has_value());
  CHECK_FALSE(modular_from_ratio(1023, 9, 2.0).has_value());
  CHECK(modular_from_ratio(64, 20, 4.0).has_value());
}
