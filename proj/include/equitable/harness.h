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

#ifndef EQUITABLE_HARNESS_H_
#define EQUITABLE_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "equitable/cavity.h"
#include "equitable/ensemble.h"
#include "equitable/partition.h"

namespace equitable {

enum class ExperimentKind {
  kSpectrum,
  kIprScatter,
  kDeltaScaling,
  kThresholdSweep,
  kPartitionOne,
};

std::string to_string(ExperimentKind kind);

// Seeds base, base + 1, ..., base + count - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);

// Two equal blocks of n / 2 with total degree c and c_in / c_out = r. Empty
// when c / (1 + r) is not an integer or the model is infeasible.
std::optional<BlockModel> modular_from_ratio(int n, int c, double r);

// Echo of one run: configuration, per-cell status and aggregates. Cells
// completed by an earlier run can be replayed from a saved manifest.
class RunManifest {
 public:
  RunManifest(ExperimentKind kind, nlohmann::json config);

  // Loads cells with status "ok" from a manifest written earlier with the
  // same configuration. Returns the number of cells restored.
  int restore(const std::string& path);

  const nlohmann::json* completed(const std::string& cell) const;
  void record(const std::string& cell, const std::string& status,
              nlohmann::json value = nullptr);
  void set_aggregate(nlohmann::json aggregate) { aggregate_ = std::move(aggregate); }

  bool has_cell(const std::string& cell) const { return cells_.count(cell) > 0; }
  std::size_t cell_count() const { return cells_.size(); }
  nlohmann::json to_json() const;
  void save(const std::string& path) const;

 private:
  struct Cell {
    std::string status;
    nlohmann::json value;
  };

  ExperimentKind kind_;
  nlohmann::json config_;
  std::map<std::string, Cell> cells_;
  nlohmann::json aggregate_;
  double started_ = 0.0;
};

std::string cell_id(int n, std::uint64_t seed);

// Pooled empirical density of `seeds.size()` samples against the cavity
// prediction and, for regular ensembles, Kesten-McKay.
struct SpectrumOptions {
  BlockModel model;
  std::vector<std::uint64_t> seeds;
  double epsilon = 1e-3;
  SolverParams solver;
  double bin_width = 0.0;  // 0 selects default_bin_width(c)
};

struct SpectrumRow {
  double lambda;
  double rho_cavity;
  std::optional<double> rho_kesten_mckay;
  double rho_empirical;
};

struct SpectrumResult {
  double bin_width = 0.0;
  std::vector<SpectrumRow> rows;
  // Pooled eigenvalues of all samples, ascending.
  std::vector<double> eigenvalues;
};

SpectrumResult run_spectrum(const SpectrumOptions& options,
                            RunManifest* manifest = nullptr);
void write_spectrum_csv(std::ostream& out, const SpectrumResult& result);

struct DeltaScalingOptions {
  int c = 9;
  double r = 2.0;
  std::vector<int> sizes;
  std::vector<std::uint64_t> seeds;
};

struct DeltaScalingRow {
  int size;
  double mean_delta;
  double sd_delta;
  int samples;
};

std::vector<DeltaScalingRow> run_delta_scaling(const DeltaScalingOptions& options,
                                               RunManifest* manifest = nullptr);
void write_delta_csv(std::ostream& out, const std::vector<DeltaScalingRow>& rows);

struct ThresholdSweepOptions {
  std::vector<int> c_values;
  std::vector<double> r_values;
  int n = 1024;
  std::vector<std::uint64_t> seeds;
};

struct ThresholdRow {
  int c;
  double r;
  int c_in;
  int c_out;
  Method method;
  double mean_overlap;
  std::optional<double> critical_ratio;
  int degenerate;
  int samples;
};

// Rows sorted by (c, r, method). Cells whose (c, r) has no integer model are
// recorded in the manifest as skipped and produce no rows.
std::vector<ThresholdRow> run_threshold_sweep(const ThresholdSweepOptions& options,
                                              RunManifest* manifest = nullptr);
void write_threshold_csv(std::ostream& out, const std::vector<ThresholdRow>& rows);

// Command-line entry point. Exit codes: 0 success, 1 usage or I/O error,
// 2 invalid input (model validation, missing ground truth), 3 sampler or
// solver failure, 4 degenerate recovery.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace equitable

#endif  // EQUITABLE_HARNESS_H_
