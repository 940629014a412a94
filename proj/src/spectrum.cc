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

#include "equitable/spectrum.h"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

namespace equitable {

namespace {

double residual_of(const Graph& graph, const Eigen::MatrixXd& vectors,
                   int column, double mu) {
  const auto v = vectors.col(column);
  double sum = 0.0;
  for (int i = 0; i < graph.vertex_count(); ++i) {
    double av = 0.0;
    for (int j : graph.neighbors(i)) av += v[j];
    const double r = av - mu * v[i];
    sum += r * r;
  }
  return std::sqrt(sum);
}

Eigen::MatrixXd dense_adjacency(const Graph& graph) {
  const int n = graph.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : graph.edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

bool solve_lapack(const Graph& graph, EigenSystem& eigs) {
  const int n = graph.vertex_count();
  eigs.vectors = dense_adjacency(graph);
  eigs.values.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, eigs.vectors.data(), n,
                     eigs.values.data());
  return info == 0;
}

void solve_eigen(const Graph& graph, EigenSystem& eigs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_adjacency(graph));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Eigen self-adjoint solver did not converge");
  eigs.values = solver.eigenvalues();
  eigs.vectors = solver.eigenvectors();
}

void measure_residual(const Graph& graph, EigenSystem& eigs) {
  eigs.residual_bound = 0.0;
  for (int k = 0; k < eigs.size(); ++k) {
    eigs.residual_bound = std::max(
        eigs.residual_bound, residual_of(graph, eigs.vectors, k, eigs.values[k]));
  }
}

}  // namespace

EigenSystem eigendecompose(const Graph& graph, int cap, EigenBackend backend) {
  const int n = graph.vertex_count();
  if (n < 1) throw std::invalid_argument("graph has no vertices");
  if (n > cap) {
    throw ResourceError("dense eigendecomposition of " + std::to_string(n) +
                        " vertices exceeds the cap of " + std::to_string(cap));
  }
  EigenSystem eigs;
  if (backend == EigenBackend::kEigen) {
    solve_eigen(graph, eigs);
    measure_residual(graph, eigs);
    return eigs;
  }
  const bool ok = solve_lapack(graph, eigs);
  if (ok) measure_residual(graph, eigs);
  const double scale = n * std::max(1.0, ok ? eigs.values.cwiseAbs().maxCoeff() : 1.0);
  if (ok && eigs.residual_bound <= kEigenResidualTol * scale) return eigs;
  if (backend == EigenBackend::kLapack) {
    throw std::runtime_error(ok ? "dsyevd residual " + std::to_string(eigs.residual_bound) +
                                      " exceeds tolerance"
                                : "dsyevd failed");
  }
  solve_eigen(graph, eigs);
  measure_residual(graph, eigs);
  return eigs;
}

DensityCurve empirical_density(std::span<const double> eigenvalues,
                               double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  DensityCurve curve;
  if (eigenvalues.empty()) return curve;
  std::map<long long, std::size_t> counts;
  for (double x : eigenvalues)
    ++counts[static_cast<long long>(std::floor(x / bin_width))];
  const long long first = counts.begin()->first;
  const long long last = counts.rbegin()->first;
  const double scale = 1.0 / (eigenvalues.size() * bin_width);
  for (long long k = first; k <= last; ++k) {
    curve.lambdas.push_back((k + 0.5) * bin_width);
    const auto it = counts.find(k);
    curve.rho.push_back(it == counts.end() ? 0.0 : it->second * scale);
  }
  return curve;
}

DensityCurve empirical_density(const EigenSystem& eigs, double bin_width) {
  return empirical_density(
      std::span<const double>(eigs.values.data(), eigs.values.size()),
      bin_width);
}

DensityCurve empirical_density(std::span<const double> eigenvalues,
                               double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  if (!(lo <= hi)) throw std::invalid_argument("empty histogram range");
  const auto first = static_cast<long long>(std::floor(lo / bin_width));
  const auto last = static_cast<long long>(std::floor(hi / bin_width));
  std::vector<std::size_t> counts(static_cast<std::size_t>(last - first + 1), 0);
  for (double x : eigenvalues) {
    const auto k = static_cast<long long>(std::floor(x / bin_width));
    if (k >= first && k <= last) ++counts[static_cast<std::size_t>(k - first)];
  }
  DensityCurve curve;
  const double scale =
      eigenvalues.empty() ? 0.0 : 1.0 / (eigenvalues.size() * bin_width);
  for (long long k = first; k <= last; ++k) {
    curve.lambdas.push_back((k + 0.5) * bin_width);
    curve.rho.push_back(counts[static_cast<std::size_t>(k - first)] * scale);
  }
  return curve;
}

double default_bin_width(int c) {
  return c < 2 ? 1.0 / 15.0 : 4.0 * std::sqrt(c - 1.0) / 60.0;
}

double kesten_mckay_bin_average(int c, double lo, double hi) {
  // Composite midpoint rule; the square-root edge singularity only costs
  // O(h^1.5) in the bins that straddle the band edge.
  constexpr int kSteps = 400;
  const double h = (hi - lo) / kSteps;
  double total = 0.0;
  for (int i = 0; i < kSteps; ++i) total += kesten_mckay(c, lo + (i + 0.5) * h);
  return total / kSteps;
}

std::vector<CommunityEigenpair> community_eigenpairs(
    const ConnectivityMatrix& connectivity) {
  const int m = connectivity.blocks();
  Eigen::MatrixXd c(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) c(a, b) = connectivity(a, b);

  std::vector<CommunityEigenpair> pairs;
  if (connectivity.symmetric()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
    for (int k = 0; k < m; ++k)
      pairs.push_back({solver.eigenvalues()[k], solver.eigenvectors().col(k)});
  } else {
    // Balanced models (N_a c_ab = N_b c_ba) have a real spectrum; keep the
    // real parts.
    Eigen::EigenSolver<Eigen::MatrixXd> solver(c);
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd v = solver.eigenvectors().col(k).real();
      pairs.push_back({solver.eigenvalues()[k].real(), v.normalized()});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.value > y.value; });
  return pairs;
}

Eigen::VectorXd lift(const Eigen::VectorXd& block_vector,
                     const Partition& labels) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    w[static_cast<Eigen::Index>(i)] = block_vector[labels[i]];
  const double norm = w.norm();
  if (norm > 0.0) w /= norm;
  return w;
}

double eigen_residual(const Graph& graph, const Eigen::VectorXd& w, double mu) {
  Eigen::MatrixXd column = w;
  return residual_of(graph, column, 0, mu);
}

double bulk_edge(int c) {
  if (c < 2) throw std::domain_error("bulk edge needs c >= 2");
  return 2.0 * std::sqrt(c - 1.0);
}

double critical_ratio(int c) {
  if (c < 3) throw std::domain_error("critical ratio needs c >= 3");
  const double edge = 2.0 * std::sqrt(c - 1.0);
  const double denominator = c - edge;
  if (!(denominator > 0.0)) {
    throw std::domain_error("critical ratio denominator is not positive");
  }
  return (c + edge) / denominator;
}

double ipr(std::span<const double> v) {
  double norm2 = 0.0, fourth = 0.0;
  for (double x : v) {
    const double x2 = x * x;
    norm2 += x2;
    fourth += x2 * x2;
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw NormError("ipr needs a unit vector");
  }
  return fourth;
}

double ipr(const Eigen::VectorXd& v) {
  return ipr(std::span<const double>(v.data(), v.size()));
}

IprTable ipr_table(const EigenSystem& eigs) {
  IprTable table;
  table.reserve(eigs.size());
  for (int k = 0; k < eigs.size(); ++k) {
    const auto col = eigs.vectors.col(k);
    table.push_back(
        {eigs.values[k], ipr(std::span<const double>(col.data(), col.size()))});
  }
  return table;
}

void write_ipr_csv(std::ostream& out, const IprTable& table) {
  out << "lambda,ipr\n" << std::setprecision(12);
  for (const auto& r : table) out << r.eigenvalue << ',' << r.ipr << '\n';
}

}  // namespace equitable
