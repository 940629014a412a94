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

#ifndef EQUITABLE_PARTITION_H_
#define EQUITABLE_PARTITION_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "equitable/ensemble.h"
#include "equitable/spectrum.h"

namespace equitable {

enum class Method { kNaive, kIprSearch };

std::string to_string(Method method);
// Accepts "naive" and "iprSearch" (also "ipr"). Throws std::invalid_argument.
Method parse_method(const std::string& text);

struct RecoveryResult {
  Partition partition;
  Method method = Method::kNaive;
  int selected_index = -1;  // column of the eigenvector used
  double selected_eigenvalue = 0.0;
  double selected_ipr = 0.0;
  // Set when the output carries no usable two-block signal: a single label,
  // or a selected eigenvalue of zero.
  bool degenerate = false;
  std::vector<std::string> warnings;
};

// Signs of the eigenvector of the second-largest eigenvalue; non-negative
// components go to block 0. When the two largest eigenvalues coincide (a
// disconnected graph), the vector used is the combination of the top pair
// orthogonal to the all-ones vector.
RecoveryResult naive_bisection(const EigenSystem& eigs);

// Drops the eigenvector of the largest eigenvalue and partitions by the
// signs of the most extended remaining one (smallest IPR). IPRs within
// 1e-12 of the minimum count as ties, resolved toward larger |eigenvalue|.
RecoveryResult ipr_recovery(const EigenSystem& eigs);

RecoveryResult recover(const EigenSystem& eigs, Method method);

// 2 * max(agreement, 1 - agreement) - 1 for two-label partitions, so exact
// recovery scores 1 and independent guessing scores about 0.
double overlap(const Partition& found, const Partition& truth);

struct IprDivergence {
  double delta = 0.0;
  double ipr2 = 0.0;
  double ipr3 = 0.0;
};

// Relative gap (IPR_3 - IPR_2) / IPR_2 between the two smallest IPRs once
// the largest-eigenvalue eigenvector is excluded.
IprDivergence ipr_divergence(const EigenSystem& eigs);

void write_recovery(std::ostream& out, const RecoveryResult& result,
                    std::optional<double> overlap_score);

}  // namespace equitable

#endif  // EQUITABLE_PARTITION_H_
