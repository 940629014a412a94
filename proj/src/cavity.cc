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

#include "equitable/cavity.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace equitable {

SpectralPoint::SpectralPoint(double lambda, double epsilon)
    : lambda_(lambda), epsilon_(epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

void SolverParams::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1]");
  }
}

namespace {

std::string non_convergence_message(double lambda, double residual,
                                    int iterations) {
  std::ostringstream os;
  os << "cavity iteration did not converge at lambda=" << lambda
     << " (residual " << residual << " after " << iterations
     << " iterations)";
  return os.str();
}

}  // namespace

NonConvergenceError::NonConvergenceError(double lambda, double residual,
                                         int iterations)
    : std::runtime_error(non_convergence_message(lambda, residual, iterations)),
      lambda_(lambda),
      residual_(residual),
      iterations_(iterations) {}

CavitySolution solve_block_cavity(const BlockModel& model, SpectralPoint point,
                                  const SolverParams& params,
                                  const CavitySolution* warm) {
  params.validate();
  const auto& c = model.connectivity;
  const int m = c.blocks();
  if (m < 1) throw std::invalid_argument("empty connectivity matrix");
  const Complex z = point.z();

  CavitySolution s;
  s.blocks = m;
  if (warm != nullptr && warm->blocks == m) {
    s.messages = warm->messages;
  } else {
    s.messages.assign(static_cast<std::size_t>(m) * m, Complex(0.0, 1.0));
  }

  std::vector<Complex> next(s.messages.size());
  const double alpha = params.damping;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    double residual = 0.0;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        Complex field = 0.0;
        for (int k = 0; k < m; ++k) {
          const int weight = std::max(c(a, k) - (b == k ? 1 : 0), 0);
          if (weight != 0) field += static_cast<double>(weight) * s.message(k, a);
        }
        const Complex update = 1.0 / (z - field);
        const std::size_t idx = static_cast<std::size_t>(a) * m + b;
        residual = std::max(residual, std::abs(update - s.messages[idx]));
        next[idx] = alpha * update + (1.0 - alpha) * s.messages[idx];
      }
    }
    s.messages.swap(next);
    s.residual = residual;
    s.iterations = iter;
    if (residual <= params.tol) break;
  }
  if (!(s.residual <= params.tol)) {
    throw NonConvergenceError(point.lambda(), s.residual, s.iterations);
  }

  s.block_variances.resize(m);
  for (int a = 0; a < m; ++a) {
    Complex field = 0.0;
    for (int k = 0; k < m; ++k)
      field += static_cast<double>(c(a, k)) * s.message(k, a);
    s.block_variances[a] = 1.0 / (z - field);
  }
  return s;
}

std::vector<Complex> solve_instance_cavity(const Graph& graph,
                                           SpectralPoint point,
                                           const SolverParams& params) {
  params.validate();
  const int n = graph.vertex_count();
  const Complex z = point.z();

  // Directed edge (v -> w) is stored at slot start[v] + position of w in
  // v's neighbor list; message[slot] is D_v^(w). reverse[slot] points at the
  // slot of (w -> v).
  std::vector<std::size_t> start(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) start[v + 1] = start[v] + graph.degree(v);
  std::vector<std::size_t> reverse(start[n]);
  for (int v = 0; v < n; ++v) {
    const auto nv = graph.neighbors(v);
    for (std::size_t k = 0; k < nv.size(); ++k) {
      const int w = nv[k];
      const auto nw = graph.neighbors(w);
      const auto pos = std::lower_bound(nw.begin(), nw.end(), v) - nw.begin();
      reverse[start[v] + k] = start[w] + static_cast<std::size_t>(pos);
    }
  }

  std::vector<Complex> message(start[n], Complex(0.0, 1.0));
  std::vector<Complex> next(message.size());
  std::vector<Complex> incoming(n);
  const double alpha = params.damping;
  double residual = 0.0;
  int iterations = 0;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    // incoming[v] = sum over neighbors w of D_w^(v).
    for (int v = 0; v < n; ++v) {
      Complex sum = 0.0;
      for (std::size_t s = start[v]; s < start[v + 1]; ++s)
        sum += message[reverse[s]];
      incoming[v] = sum;
    }
    residual = 0.0;
    for (int v = 0; v < n; ++v) {
      for (std::size_t s = start[v]; s < start[v + 1]; ++s) {
        const Complex update = 1.0 / (z - (incoming[v] - message[reverse[s]]));
        residual = std::max(residual, std::abs(update - message[s]));
        next[s] = alpha * update + (1.0 - alpha) * message[s];
      }
    }
    message.swap(next);
    iterations = iter;
    if (residual <= params.tol) break;
  }
  if (!(residual <= params.tol)) {
    throw NonConvergenceError(point.lambda(), residual, iterations);
  }

  std::vector<Complex> variances(n);
  for (int v = 0; v < n; ++v) {
    Complex sum = 0.0;
    for (std::size_t s = start[v]; s < start[v + 1]; ++s)
      sum += message[reverse[s]];
    variances[v] = 1.0 / (z - sum);
  }
  return variances;
}

double DensityCurve::integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    total += 0.5 * (rho[i] + rho[i - 1]) * (lambdas[i] - lambdas[i - 1]);
  return total;
}

DensityCurve density_curve(const BlockModel& model,
                           const std::vector<double>& lambdas, double epsilon,
                           const SolverParams& params) {
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
    throw std::invalid_argument("lambda grid must be sorted");
  }
  const int m = model.connectivity.blocks();
  std::vector<double> weight(m, 1.0 / m);
  if (model.blocks() == m && m > 0) {
    const double total = model.vertex_count();
    for (int a = 0; a < m; ++a) weight[a] = model.sizes[a] / total;
  }

  DensityCurve curve;
  curve.lambdas = lambdas;
  curve.rho.reserve(lambdas.size());
  CavitySolution previous;
  bool have_previous = false;
  for (double lambda : lambdas) {
    const SpectralPoint point(lambda, epsilon);
    CavitySolution s;
    try {
      s = solve_block_cavity(model, point, params,
                             have_previous ? &previous : nullptr);
    } catch (const NonConvergenceError&) {
      if (!have_previous) throw;
      s = solve_block_cavity(model, point, params);
    }
    double rho = 0.0;
    for (int a = 0; a < m; ++a) rho += weight[a] * s.block_variances[a].imag();
    curve.rho.push_back(std::max(rho, 0.0) / std::numbers::pi);
    previous = std::move(s);
    have_previous = true;
  }
  return curve;
}

std::vector<double> default_grid(const BlockModel& model, int points) {
  int c = 0;
  for (int a = 0; a < model.connectivity.blocks(); ++a)
    c = std::max(c, model.connectivity.row_sum(a));
  const double half = c + 1.0;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = points == 1 ? 0.0 : -half + 2.0 * half * i / (points - 1);
  return grid;
}

double kesten_mckay(int c, double lambda) {
  if (c < 2) throw std::domain_error("Kesten-McKay density needs c >= 2");
  const double radicand = 4.0 * (c - 1) - lambda * lambda;
  if (radicand <= 0.0) return 0.0;
  return c * std::sqrt(radicand) /
         (2.0 * std::numbers::pi * (c * c - lambda * lambda));
}

void write_density_csv(std::ostream& out, const DensityCurve& curve) {
  out << "lambda,rho\n" << std::setprecision(10);
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
    out << curve.lambdas[i] << ',' << curve.rho[i] << '\n';
}

void write_cavity_solution(std::ostream& out, const CavitySolution& s) {
  out << std::setprecision(17);
  out << "blocks = " << s.blocks << '\n';
  out << "iterations = " << s.iterations << '\n';
  out << "residual = " << s.residual << '\n';
  for (int a = 0; a < s.blocks; ++a) {
    for (int b = 0; b < s.blocks; ++b) {
      const Complex d = s.message(a, b);
      out << "message[" << a << "][" << b << "] = " << d.real() << ' '
          << d.imag() << '\n';
    }
  }
  for (int a = 0; a < s.blocks; ++a) {
    out << "variance[" << a << "] = " << s.block_variances[a].real() << ' '
        << s.block_variances[a].imag() << '\n';
  }
}

}  // namespace equitable
