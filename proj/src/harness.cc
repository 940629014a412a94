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

#include "equitable/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "equitable/spectrum.h"

#ifndef EQUITABLE_VERSION
#define EQUITABLE_VERSION "dev"
#endif

namespace equitable {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int max_row_sum(const ConnectivityMatrix& c) {
  int best = 0;
  for (int a = 0; a < c.blocks(); ++a) best = std::max(best, c.row_sum(a));
  return best;
}

// Total degree when every block has the same row sum, else -1.
int regular_degree(const ConnectivityMatrix& c) {
  const int first = c.row_sum(0);
  for (int a = 1; a < c.blocks(); ++a)
    if (c.row_sum(a) != first) return -1;
  return first;
}

std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / xs.size();
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = mean_of(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / (xs.size() - 1));
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSpectrum: return "spectrum";
    case ExperimentKind::kIprScatter: return "iprScatter";
    case ExperimentKind::kDeltaScaling: return "deltaScaling";
    case ExperimentKind::kThresholdSweep: return "thresholdSweep";
    case ExperimentKind::kPartitionOne: return "partitionOne";
  }
  return "unknown";
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base + i);
  return seeds;
}

std::optional<BlockModel> modular_from_ratio(int n, int c, double r) {
  if (n <= 0 || n % 2 != 0 || c <= 0 || !(r > 0.0)) return std::nullopt;
  const double c_out = c / (1.0 + r);
  const int rounded = static_cast<int>(std::lround(c_out));
  if (rounded <= 0 || std::abs(c_out - rounded) > 1e-9) return std::nullopt;
  BlockModel model = BlockModel::Modular(n, c - rounded, rounded);
  if (!validate_model(model).empty()) return std::nullopt;
  return model;
}

std::string cell_id(int n, std::uint64_t seed) {
  return "n=" + std::to_string(n) + ",seed=" + std::to_string(seed);
}

RunManifest::RunManifest(ExperimentKind kind, nlohmann::json config)
    : kind_(kind), config_(std::move(config)), started_(now_seconds()) {}

int RunManifest::restore(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0;
  nlohmann::json saved;
  try {
    in >> saved;
  } catch (const nlohmann::json::exception&) {
    return 0;
  }
  if (saved.value("kind", "") != to_string(kind_) ||
      saved.value("config", nlohmann::json()) != config_) {
    return 0;
  }
  int restored = 0;
  for (const auto& cell : saved.value("cells", nlohmann::json::array())) {
    if (cell.value("status", "") != "ok") continue;
    cells_[cell.at("id").get<std::string>()] = {"ok", cell.value("value", nlohmann::json())};
    ++restored;
  }
  return restored;
}

const nlohmann::json* RunManifest::completed(const std::string& cell) const {
  const auto it = cells_.find(cell);
  if (it == cells_.end() || it->second.status != "ok") return nullptr;
  return &it->second.value;
}

void RunManifest::record(const std::string& cell, const std::string& status,
                         nlohmann::json value) {
  cells_[cell] = {status, std::move(value)};
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "equitable";
  j["version"] = EQUITABLE_VERSION;
  j["kind"] = to_string(kind_);
  j["config"] = config_;
  j["cells"] = nlohmann::json::array();
  for (const auto& [id, cell] : cells_) {
    nlohmann::json c = {{"id", id}, {"status", cell.status}};
    if (!cell.value.is_null()) c["value"] = cell.value;
    j["cells"].push_back(std::move(c));
  }
  j["aggregate"] = aggregate_;
  j["wall_clock_seconds"] = now_seconds() - started_;
  return j;
}

void RunManifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path);
  out << to_json().dump(2) << '\n';
}

SpectrumResult run_spectrum(const SpectrumOptions& options,
                            RunManifest* manifest) {
  const auto issues = validate_model(options.model);
  if (!issues.empty()) throw std::invalid_argument(issues.front());
  const auto& c = options.model.connectivity;
  const int degree = max_row_sum(c);

  SpectrumResult result;
  result.bin_width =
      options.bin_width > 0.0 ? options.bin_width : default_bin_width(degree);
  for (std::uint64_t seed : options.seeds) {
    const Graph graph = sample(options.model, seed);
    const EigenSystem eigs = eigendecompose(graph);
    result.eigenvalues.insert(result.eigenvalues.end(), eigs.values.begin(),
                              eigs.values.end());
    if (manifest != nullptr) {
      manifest->record(cell_id(graph.vertex_count(), seed), "ok",
                       {{"residual_bound", eigs.residual_bound}});
    }
  }
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end());

  const double half = degree + 1.0;
  const DensityCurve empirical =
      empirical_density(result.eigenvalues, result.bin_width, -half, half);
  const DensityCurve cavity = density_curve(options.model, empirical.lambdas,
                                            options.epsilon, options.solver);
  const int regular = regular_degree(c);
  const bool closed_form = regular >= 2 && options.model.equal_sizes();
  for (std::size_t i = 0; i < empirical.lambdas.size(); ++i) {
    SpectrumRow row{empirical.lambdas[i], cavity.rho[i], std::nullopt,
                    empirical.rho[i]};
    if (closed_form) row.rho_kesten_mckay = kesten_mckay(regular, row.lambda);
    result.rows.push_back(row);
  }
  if (manifest != nullptr) {
    manifest->set_aggregate({{"bins", result.rows.size()},
                             {"bin_width", result.bin_width},
                             {"eigenvalues", result.eigenvalues.size()},
                             {"cavity_integral", cavity.integral()}});
  }
  return result;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& result) {
  out << "lambda,rho_cavity,rho_kesten_mckay,rho_empirical\n";
  for (const auto& row : result.rows) {
    out << format_number(row.lambda) << ',' << format_number(row.rho_cavity)
        << ',';
    if (row.rho_kesten_mckay) out << format_number(*row.rho_kesten_mckay);
    out << ',' << format_number(row.rho_empirical) << '\n';
  }
}

std::vector<DeltaScalingRow> run_delta_scaling(
    const DeltaScalingOptions& options, RunManifest* manifest) {
  if (options.seeds.empty()) throw std::invalid_argument("no seeds given");
  std::vector<int> sizes = options.sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<DeltaScalingRow> rows;
  for (int n : sizes) {
    const auto model = modular_from_ratio(n, options.c, options.r);
    if (!model) {
      throw std::invalid_argument("no feasible modular model for n=" +
                                  std::to_string(n) + ", c=" +
                                  std::to_string(options.c) + ", r=" +
                                  format_number(options.r));
    }
    std::vector<double> deltas;
    for (std::uint64_t seed : options.seeds) {
      const std::string id = cell_id(n, seed);
      if (manifest != nullptr) {
        if (const auto* done = manifest->completed(id)) {
          deltas.push_back(done->at("delta").get<double>());
          continue;
        }
      }
      try {
        const EigenSystem eigs = eigendecompose(sample(*model, seed));
        const IprDivergence d = ipr_divergence(eigs);
        deltas.push_back(d.delta);
        if (manifest != nullptr) {
          manifest->record(id, "ok",
                           {{"delta", d.delta}, {"ipr2", d.ipr2}, {"ipr3", d.ipr3}});
        }
      } catch (const SamplerError& e) {
        if (manifest != nullptr) manifest->record(id, std::string("failed: ") + e.what());
      }
    }
    rows.push_back({n, mean_of(deltas), sd_of(deltas),
                    static_cast<int>(deltas.size())});
  }
  if (manifest != nullptr) {
    nlohmann::json agg = nlohmann::json::array();
    for (const auto& r : rows)
      agg.push_back({{"size", r.size}, {"mean_delta", r.mean_delta},
                     {"sd_delta", r.sd_delta}, {"samples", r.samples}});
    manifest->set_aggregate(agg);
  }
  return rows;
}

void write_delta_csv(std::ostream& out, const std::vector<DeltaScalingRow>& rows) {
  out << "size,meanDelta,sdDelta,samples\n";
  for (const auto& r : rows) {
    out << r.size << ',' << format_number(r.mean_delta) << ','
        << format_number(r.sd_delta) << ',' << r.samples << '\n';
  }
}

std::vector<ThresholdRow> run_threshold_sweep(
    const ThresholdSweepOptions& options, RunManifest* manifest) {
  if (options.seeds.empty()) throw std::invalid_argument("no seeds given");
  std::vector<ThresholdRow> rows;
  for (int c : options.c_values) {
    for (double r : options.r_values) {
      const auto model = modular_from_ratio(options.n, c, r);
      const std::string cell_prefix =
          "c=" + std::to_string(c) + ",r=" + format_number(r);
      if (!model) {
        if (manifest != nullptr)
          manifest->record(cell_prefix, "skipped: c / (1 + r) is not a feasible integer");
        continue;
      }
      std::vector<double> naive, search;
      int naive_degenerate = 0, search_degenerate = 0;
      for (std::uint64_t seed : options.seeds) {
        const std::string id = cell_prefix + "," + cell_id(options.n, seed);
        nlohmann::json value;
        if (const auto* done = manifest ? manifest->completed(id) : nullptr) {
          value = *done;
        } else {
          try {
            const Graph graph = sample(*model, seed);
            const EigenSystem eigs = eigendecompose(graph);
            const RecoveryResult a = naive_bisection(eigs);
            const RecoveryResult b = ipr_recovery(eigs);
            value = {{"naive", overlap(a.partition, graph.labels())},
                     {"naive_degenerate", a.degenerate},
                     {"iprSearch", overlap(b.partition, graph.labels())},
                     {"iprSearch_degenerate", b.degenerate}};
            if (manifest != nullptr) manifest->record(id, "ok", value);
          } catch (const SamplerError& e) {
            if (manifest != nullptr)
              manifest->record(id, std::string("failed: ") + e.what());
            continue;
          }
        }
        naive.push_back(value.at("naive").get<double>());
        search.push_back(value.at("iprSearch").get<double>());
        naive_degenerate += value.at("naive_degenerate").get<bool>();
        search_degenerate += value.at("iprSearch_degenerate").get<bool>();
      }
      const auto& cm = model->connectivity;
      std::optional<double> rc;
      if (c >= 3) rc = critical_ratio(c);
      rows.push_back({c, r, cm(0, 0), cm(0, 1), Method::kNaive, mean_of(naive),
                      rc, naive_degenerate, static_cast<int>(naive.size())});
      rows.push_back({c, r, cm(0, 0), cm(0, 1), Method::kIprSearch,
                      mean_of(search), rc, search_degenerate,
                      static_cast<int>(search.size())});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return std::tie(x.c, x.r, x.method) < std::tie(y.c, y.r, y.method);
  });
  if (manifest != nullptr) {
    nlohmann::json agg = nlohmann::json::array();
    for (const auto& row : rows)
      agg.push_back({{"c", row.c}, {"r", row.r}, {"method", to_string(row.method)},
                     {"mean_overlap", row.mean_overlap},
                     {"degenerate", row.degenerate}, {"samples", row.samples}});
    manifest->set_aggregate(agg);
  }
  return rows;
}

void write_threshold_csv(std::ostream& out,
                         const std::vector<ThresholdRow>& rows) {
  out << "c,r,c_in,c_out,method,meanOverlap,r_c,degenerate,samples\n";
  for (const auto& row : rows) {
    out << row.c << ',' << format_number(row.r) << ',' << row.c_in << ','
        << row.c_out << ',' << to_string(row.method) << ','
        << format_number(row.mean_overlap) << ',';
    if (row.critical_ratio) out << format_number(*row.critical_ratio);
    out << ',' << row.degenerate << ',' << row.samples << '\n';
  }
}

}  // namespace equitable
