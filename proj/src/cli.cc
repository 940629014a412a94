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
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "equitable/graph_io.h"
#include "equitable/harness.h"
#include "equitable/spectrum.h"

namespace equitable {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitFailure = 3;
constexpr int kExitDegenerate = 4;

// Directory used for outputs when --out is not given.
std::string output_dir() {
  const char* dir = std::getenv("EQUITABLE_OUTPUT_DIR");
  return dir != nullptr && *dir != '\0' ? std::string(dir) : std::string(".");
}

std::string resolve_out(const std::string& out, const std::string& fallback) {
  return out.empty() ? output_dir() + "/" + fallback : out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

struct SolverFlags {
  double epsilon = 1e-3;
  SolverParams params;

  void attach(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "imaginary regularizer")
        ->check(CLI::PositiveNumber);
    app->add_option("--tol", params.tol, "cavity tolerance (max abs change)")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iter", params.max_iter, "cavity iteration cap")
        ->check(CLI::PositiveNumber);
    app->add_option("--damping", params.damping, "cavity damping in (0, 1]")
        ->check(CLI::Range(0.0, 1.0));
  }
};

int report_invalid(const BlockModel& model, std::ostream& err) {
  const auto issues = validate_model(model);
  for (const auto& issue : issues) err << "invalid model: " << issue << '\n';
  return issues.empty() ? kExitOk : kExitInvalid;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Equitable random graphs: sampling, spectra and recovery"};
  app.require_subcommand(1);
  std::string format = "csv";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv"}));

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "sample one graph");
  std::string model_path, out_path;
  std::uint64_t seed = 1;
  bool shuffle = false;
  sample_cmd->add_option("--model", model_path, "model file")->required();
  sample_cmd->add_option("--seed", seed, "random seed");
  sample_cmd->add_option("--out", out_path, "edge-list output");
  sample_cmd->add_flag("--shuffle", shuffle, "randomly relabel vertices");

  // spectrum
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "empirical vs predicted spectral density");
  int samples = 100;
  int n_override = 0;
  double bin_width = 0.0;
  SolverFlags solver;
  spectrum_cmd->add_option("--model", model_path, "model file")->required();
  spectrum_cmd->add_option("--samples", samples, "graphs pooled")
      ->check(CLI::PositiveNumber);
  spectrum_cmd->add_option("--n", n_override, "total size, split evenly over blocks");
  spectrum_cmd->add_option("--seed", seed, "first seed");
  spectrum_cmd->add_option("--bin-width", bin_width, "histogram bin width");
  spectrum_cmd->add_option("--out", out_path, "CSV output");
  solver.attach(spectrum_cmd);

  // partition
  auto* partition_cmd = app.add_subcommand("partition", "recover two blocks");
  std::string graph_path, method_name = "iprSearch", ipr_out;
  bool want_overlap = false;
  partition_cmd->add_option("--graph", graph_path, "edge-list file")->required();
  partition_cmd->add_option("--method", method_name, "naive or iprSearch")
      ->check(CLI::IsMember({"naive", "iprSearch", "ipr"}));
  partition_cmd->add_flag("--overlap", want_overlap,
                          "score against the labels in the file");
  partition_cmd->add_option("--out", out_path, "result output (default stdout)");
  partition_cmd->add_option("--ipr-out", ipr_out, "lambda,ipr CSV of all eigenvectors");

  // delta-scaling
  auto* delta_cmd =
      app.add_subcommand("delta-scaling", "relative IPR divergence against size");
  int c = 9;
  double r = 2.0;
  std::vector<int> sizes{64, 128, 256, 512, 1024, 2048, 4096, 8192};
  int seeds_per_cell = 10;
  bool resume = false;
  delta_cmd->add_option("--c", c, "total degree");
  delta_cmd->add_option("--r", r, "ratio c_in / c_out");
  delta_cmd->add_option("--sizes", sizes, "graph sizes")->delimiter(',');
  delta_cmd->add_option("--seeds", seeds_per_cell, "seeds per size")
      ->check(CLI::PositiveNumber);
  delta_cmd->add_option("--seed", seed, "first seed");
  delta_cmd->add_option("--out", out_path, "CSV output");
  delta_cmd->add_flag("--resume", resume, "reuse finished cells from the manifest");

  // threshold-sweep
  auto* sweep_cmd = app.add_subcommand(
      "threshold-sweep", "mean overlap of both methods over a (c, r) grid");
  std::vector<int> c_values{9};
  std::vector<double> r_values{1, 2, 8};
  int n = 1024;
  sweep_cmd->add_option("--c", c_values, "total degrees")->delimiter(',');
  sweep_cmd->add_option("--r", r_values, "ratios c_in / c_out")->delimiter(',');
  sweep_cmd->add_option("--n", n, "graph size")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seeds", seeds_per_cell, "seeds per cell")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "first seed");
  sweep_cmd->add_option("--out", out_path, "CSV output");
  sweep_cmd->add_flag("--resume", resume, "reuse finished cells from the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample_cmd) {
      const BlockModel model = load_model(model_path);
      if (const int code = report_invalid(model, err)) return code;
      Graph graph = sample(model, seed);
      if (shuffle) graph = permute_vertices(graph, seed);
      const std::string path =
          resolve_out(out_path, "graph_seed" + std::to_string(seed) + ".txt");
      auto f = open_out(path);
      write_edge_list(f, graph);
      return kExitOk;
    }

    if (*spectrum_cmd) {
      SpectrumOptions options;
      options.model = load_model(model_path);
      if (n_override > 0) {
        const int m = options.model.blocks();
        if (m == 0 || n_override % m != 0) {
          err << "--n must be a multiple of the block count\n";
          return kExitInvalid;
        }
        options.model.sizes.assign(m, n_override / m);
      }
      if (const int code = report_invalid(options.model, err)) return code;
      options.seeds = seed_range(seed, samples);
      options.epsilon = solver.epsilon;
      options.solver = solver.params;
      options.bin_width = bin_width;
      RunManifest manifest(ExperimentKind::kSpectrum,
                           {{"model_sizes", options.model.sizes},
                            {"samples", samples},
                            {"first_seed", seed},
                            {"epsilon", options.epsilon},
                            {"tol", options.solver.tol},
                            {"max_iter", options.solver.max_iter},
                            {"damping", options.solver.damping},
                            {"bin_width", bin_width}});
      const SpectrumResult result = run_spectrum(options, &manifest);
      const std::string path = resolve_out(out_path, "spectrum.csv");
      auto f = open_out(path);
      write_spectrum_csv(f, result);
      manifest.save(path + ".manifest.json");
      return kExitOk;
    }

    if (*partition_cmd) {
      const Graph graph = load_graph(graph_path);
      if (want_overlap && !graph.has_labels()) {
        err << "no ground truth: " << graph_path << " has no labels line\n";
        return kExitInvalid;
      }
      const EigenSystem eigs = eigendecompose(graph);
      const RecoveryResult result = recover(eigs, parse_method(method_name));
      std::optional<double> score;
      if (want_overlap) score = overlap(result.partition, graph.labels());
      if (out_path.empty()) {
        write_recovery(out, result, score);
      } else {
        auto f = open_out(out_path);
        write_recovery(f, result, score);
      }
      if (!ipr_out.empty()) {
        auto f = open_out(ipr_out);
        write_ipr_csv(f, ipr_table(eigs));
      }
      return result.degenerate ? kExitDegenerate : kExitOk;
    }

    if (*delta_cmd) {
      DeltaScalingOptions options{c, r, sizes, seed_range(seed, seeds_per_cell)};
      RunManifest manifest(ExperimentKind::kDeltaScaling,
                           {{"c", c}, {"r", r}, {"sizes", sizes},
                            {"seeds", options.seeds}});
      const std::string path = resolve_out(out_path, "delta_scaling.csv");
      if (resume) manifest.restore(path + ".manifest.json");
      const auto rows = run_delta_scaling(options, &manifest);
      auto f = open_out(path);
      write_delta_csv(f, rows);
      manifest.save(path + ".manifest.json");
      return kExitOk;
    }

    if (*sweep_cmd) {
      ThresholdSweepOptions options{c_values, r_values, n,
                                    seed_range(seed, seeds_per_cell)};
      RunManifest manifest(ExperimentKind::kThresholdSweep,
                           {{"c", c_values}, {"r", r_values}, {"n", n},
                            {"seeds", options.seeds}});
      const std::string path = resolve_out(out_path, "threshold_sweep.csv");
      if (resume) manifest.restore(path + ".manifest.json");
      const auto rows = run_threshold_sweep(options, &manifest);
      auto f = open_out(path);
      write_threshold_csv(f, rows);
      manifest.save(path + ".manifest.json");
      return kExitOk;
    }
  } catch (const SamplerError& e) {
    err << "sampler failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const NonConvergenceError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace equitable
