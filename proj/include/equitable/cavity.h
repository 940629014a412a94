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

#ifndef EQUITABLE_CAVITY_H_
#define EQUITABLE_CAVITY_H_

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "equitable/ensemble.h"

namespace equitable {

using Complex = std::complex<double>;

// Point z = lambda - i*epsilon below the real axis at which resolvent
// diagonals are evaluated.
class SpectralPoint {
 public:
  // Throws std::invalid_argument unless epsilon > 0.
  SpectralPoint(double lambda, double epsilon);

  double lambda() const { return lambda_; }
  double epsilon() const { return epsilon_; }
  Complex z() const { return {lambda_, -epsilon_}; }

 private:
  double lambda_;
  double epsilon_;
};

struct SolverParams {
  double tol = 1e-10;
  int max_iter = 100000;
  double damping = 0.7;

  void validate() const;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(double lambda, double residual, int iterations);

  double lambda() const { return lambda_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double lambda_;
  double residual_;
  int iterations_;
};

// Converged block cavity variances at one spectral point.
struct CavitySolution {
  int blocks = 0;
  // message(a, b) is the variance of a block-a node with its block-b
  // neighbor removed. Row-major, blocks x blocks.
  std::vector<Complex> messages;
  std::vector<Complex> block_variances;
  double residual = 0.0;
  int iterations = 0;

  Complex message(int a, int b) const { return messages[a * blocks + b]; }
};

// Fixed point of the block-reduced cavity equations
//   D_a^(b) = 1 / (z - sum_c max(c_ac - [b == c], 0) D_c^(a)),
// followed by D_a = 1 / (z - sum_c c_ac D_c^(a)). Iteration starts at i (or
// at `warm` when given) and is damped. The residual is the largest
// undamped change |F(D) - D|.
CavitySolution solve_block_cavity(const BlockModel& model, SpectralPoint point,
                                  const SolverParams& params,
                                  const CavitySolution* warm = nullptr);

// Per-vertex resolvent diagonals from the cavity equations on one graph.
// Messages live on directed edges and are updated synchronously.
std::vector<Complex> solve_instance_cavity(const Graph& graph,
                                           SpectralPoint point,
                                           const SolverParams& params);

// Spectral density sampled on a sorted grid.
struct DensityCurve {
  std::vector<double> lambdas;
  std::vector<double> rho;

  // Trapezoid rule over the grid.
  double integral() const;
};

// Ensemble density rho(lambda) = (1/pi) sum_a (N_a / N) Im D_a(lambda - i eps)
// over a sorted grid, warm-starting each point from the previous one.
DensityCurve density_curve(const BlockModel& model,
                           const std::vector<double>& lambdas, double epsilon,
                           const SolverParams& params);

// Default evaluation grid: `points` evenly spaced values over [-(c+1), c+1]
// where c is the largest row sum of the model.
std::vector<double> default_grid(const BlockModel& model, int points = 401);

// Kesten-McKay density of random c-regular graphs. Throws std::domain_error
// for c < 2.
double kesten_mckay(int c, double lambda);

// CSV with header "lambda,rho".
void write_density_csv(std::ostream& out, const DensityCurve& curve);
// Structured text dump of a solution, one "key = value" per line.
void write_cavity_solution(std::ostream& out, const CavitySolution& solution);

}  // namespace equitable

#endif  // EQUITABLE_CAVITY_H_
