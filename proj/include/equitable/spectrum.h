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

#ifndef EQUITABLE_SPECTRUM_H_
#define EQUITABLE_SPECTRUM_H_

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "equitable/cavity.h"
#include "equitable/ensemble.h"

namespace equitable {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Full adjacency spectrum. Column k of `vectors` is the unit eigenvector
// of values[k]; values are ascending.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  // Largest ||A v - lambda v||_2 over all pairs.
  double residual_bound = 0.0;

  int size() const { return static_cast<int>(values.size()); }
};

inline constexpr int kDefaultEigenCap = 16384;

// Residual tolerance accepted from the LAPACK backend, relative to
// n * max(1, |lambda|_max).
inline constexpr double kEigenResidualTol = 1e-10;

enum class EigenBackend {
  kAuto,    // LAPACK, re-solved with Eigen if the residual check fails
  kLapack,
  kEigen,
};

// Dense symmetric eigendecomposition of the adjacency matrix (O(n^3) time,
// O(n^2) memory). Throws ResourceError when n exceeds `cap`.
EigenSystem eigendecompose(const Graph& graph, int cap = kDefaultEigenCap,
                           EigenBackend backend = EigenBackend::kAuto);

// Normalized histogram (unit area) with bin edges at integer multiples of
// bin_width; lambdas are bin centers.
DensityCurve empirical_density(std::span<const double> eigenvalues,
                               double bin_width);
DensityCurve empirical_density(const EigenSystem& eigs, double bin_width);
// Same normalization, but reports exactly the bins overlapping [lo, hi].
// Values outside the range still count toward the total.
DensityCurve empirical_density(std::span<const double> eigenvalues,
                               double bin_width, double lo, double hi);

// Default histogram bin width for total degree c: 4 sqrt(c - 1) / 60, or
// 1/15 when c < 2.
double default_bin_width(int c);

// Average of the Kesten-McKay density over [lo, hi].
double kesten_mckay_bin_average(int c, double lo, double hi);

struct CommunityEigenpair {
  double value;
  Eigen::VectorXd vector;  // unit norm, length m
};

// Eigenpairs of the connectivity matrix, descending by eigenvalue. Each one
// lifts to a block-constant eigenvector of every graph of the ensemble.
std::vector<CommunityEigenpair> community_eigenpairs(
    const ConnectivityMatrix& connectivity);

// Block-constant vector w_i = u_{g_i}, scaled to unit norm.
Eigen::VectorXd lift(const Eigen::VectorXd& block_vector,
                     const Partition& labels);

// ||A w - mu w||_2 computed from the adjacency lists.
double eigen_residual(const Graph& graph, const Eigen::VectorXd& w, double mu);

// Upper edge 2 sqrt(c - 1) of the bulk for total degree c >= 2.
double bulk_edge(int c);

// Assortativity ratio c_in / c_out at which c_in - c_out reaches the bulk
// edge: (c + 2 sqrt(c-1)) / (c - 2 sqrt(c-1)). Defined for c >= 3.
double critical_ratio(int c);

// Inverse participation ratio sum_i v_i^4 of a unit vector. Throws NormError
// if | ||v|| - 1 | > 1e-10.
double ipr(std::span<const double> v);
double ipr(const Eigen::VectorXd& v);

struct IprRecord {
  double eigenvalue;
  double ipr;
};
using IprTable = std::vector<IprRecord>;

IprTable ipr_table(const EigenSystem& eigs);
// CSV with header "lambda,ipr".
void write_ipr_csv(std::ostream& out, const IprTable& table);

}  // namespace equitable

#endif  // EQUITABLE_SPECTRUM_H_
