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

#include "equitable/partition.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace equitable {

namespace {

constexpr double kEigenvalueTie = 1e-10;
constexpr double kIprTie = 1e-12;
constexpr double kZeroEigenvalue = 1e-8;

Partition sign_partition(const Eigen::VectorXd& v) {
  Partition p;
  p.labels.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    p.labels[static_cast<std::size_t>(i)] = v[i] >= 0.0 ? 0 : 1;
  return p;
}

bool single_label(const Partition& p) {
  return std::adjacent_find(p.labels.begin(), p.labels.end(),
                            std::not_equal_to<>()) == p.labels.end();
}

void flag_if_single_label(RecoveryResult& r) {
  if (single_label(r.partition)) {
    r.degenerate = true;
    r.warnings.push_back("partition uses a single label");
  }
}

}  // namespace

std::string to_string(Method method) {
  return method == Method::kNaive ? "naive" : "iprSearch";
}

Method parse_method(const std::string& text) {
  if (text == "naive") return Method::kNaive;
  if (text == "iprSearch" || text == "ipr") return Method::kIprSearch;
  throw std::invalid_argument("unknown method '" + text + "'");
}

RecoveryResult naive_bisection(const EigenSystem& eigs) {
  const int n = eigs.size();
  if (n < 2) throw std::invalid_argument("naive bisection needs n >= 2");
  RecoveryResult r;
  r.method = Method::kNaive;
  r.selected_index = n - 2;
  r.selected_eigenvalue = eigs.values[n - 2];

  Eigen::VectorXd v = eigs.vectors.col(n - 2);
  if (eigs.values[n - 1] - eigs.values[n - 2] <= kEigenvalueTie) {
    const Eigen::VectorXd top = eigs.vectors.col(n - 1);
    const Eigen::VectorXd rotated = v * top.sum() - top * v.sum();
    if (rotated.norm() > 1e-8) v = rotated.normalized();
    r.warnings.push_back(
        "largest eigenvalue is degenerate; using the top-pair combination "
        "orthogonal to the constant vector");
  }
  if (n >= 3 && eigs.values[n - 2] - eigs.values[n - 3] <= kEigenvalueTie) {
    r.warnings.push_back(
        "second and third eigenvalues coincide; the split is not unique");
  }
  r.selected_ipr = ipr(v);
  r.partition = sign_partition(v);
  flag_if_single_label(r);
  return r;
}

RecoveryResult ipr_recovery(const EigenSystem& eigs) {
  const int n = eigs.size();
  if (n < 2) throw std::invalid_argument("IPR recovery needs n >= 2");
  const IprTable table = ipr_table(eigs);

  // The largest eigenvalue sits in the last column.
  double best = table[0].ipr;
  for (int k = 1; k < n - 1; ++k) best = std::min(best, table[k].ipr);
  int chosen = -1;
  int ties = 0;
  for (int k = 0; k < n - 1; ++k) {
    if (table[k].ipr - best > kIprTie) continue;
    ++ties;
    if (chosen < 0 ||
        std::abs(table[k].eigenvalue) > std::abs(table[chosen].eigenvalue)) {
      chosen = k;
    }
  }

  RecoveryResult r;
  r.method = Method::kIprSearch;
  r.selected_index = chosen;
  r.selected_eigenvalue = table[chosen].eigenvalue;
  r.selected_ipr = table[chosen].ipr;
  r.partition = sign_partition(eigs.vectors.col(chosen));
  if (ties > 1) {
    std::ostringstream os;
    os << ties << " eigenvectors share the minimal IPR within " << kIprTie;
    r.warnings.push_back(os.str());
  }
  if (std::abs(r.selected_eigenvalue) <= kZeroEigenvalue) {
    r.degenerate = true;
    r.warnings.push_back(
        "selected eigenvalue is zero: c_in = c_out carries no block signal");
  }
  flag_if_single_label(r);
  return r;
}

RecoveryResult recover(const EigenSystem& eigs, Method method) {
  return method == Method::kNaive ? naive_bisection(eigs) : ipr_recovery(eigs);
}

double overlap(const Partition& found, const Partition& truth) {
  if (found.size() != truth.size()) {
    throw DimensionError("partitions differ in length");
  }
  if (found.size() == 0) throw DimensionError("empty partitions");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i] < 0 || found[i] > 1 || truth[i] < 0 || truth[i] > 1) {
      throw DimensionError("overlap needs two-label partitions");
    }
    agree += found[i] == truth[i];
  }
  const std::size_t best = std::max(agree, found.size() - agree);
  return static_cast<double>(2 * best - found.size()) / found.size();
}

IprDivergence ipr_divergence(const EigenSystem& eigs) {
  const int n = eigs.size();
  if (n < 3) throw std::invalid_argument("IPR divergence needs n >= 3");
  std::vector<double> iprs;
  iprs.reserve(n - 1);
  const IprTable table = ipr_table(eigs);
  for (int k = 0; k < n - 1; ++k) iprs.push_back(table[k].ipr);
  std::partial_sort(iprs.begin(), iprs.begin() + 2, iprs.end());
  IprDivergence d;
  d.ipr2 = iprs[0];
  d.ipr3 = iprs[1];
  d.delta = (d.ipr3 - d.ipr2) / d.ipr2;
  return d;
}

void write_recovery(std::ostream& out, const RecoveryResult& r,
                    std::optional<double> overlap_score) {
  out << std::setprecision(12);
  out << "method = " << to_string(r.method) << '\n';
  out << "selected_index = " << r.selected_index << '\n';
  out << "selected_eigenvalue = " << r.selected_eigenvalue << '\n';
  out << "selected_ipr = " << r.selected_ipr << '\n';
  out << "degenerate = " << (r.degenerate ? "true" : "false") << '\n';
  if (overlap_score) out << "overlap = " << *overlap_score << '\n';
  for (const auto& w : r.warnings) out << "warning = " << w << '\n';
}

}  // namespace equitable
