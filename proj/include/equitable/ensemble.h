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

#ifndef EQUITABLE_ENSEMBLE_H_
#define EQUITABLE_ENSEMBLE_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace equitable {

// Square matrix of per-node block degrees: entry (a, b) is the number of
// neighbors every vertex of block a has inside block b.
class ConnectivityMatrix {
 public:
  ConnectivityMatrix() = default;
  explicit ConnectivityMatrix(int blocks);
  ConnectivityMatrix(std::initializer_list<std::initializer_list<int>> rows);
  static ConnectivityMatrix FromRows(const std::vector<std::vector<int>>& rows);

  int blocks() const { return blocks_; }
  int operator()(int a, int b) const { return entries_[index(a, b)]; }
  int& operator()(int a, int b) { return entries_[index(a, b)]; }

  // Total degree of a vertex in block a.
  int row_sum(int a) const;
  bool symmetric() const;

  friend bool operator==(const ConnectivityMatrix&,
                         const ConnectivityMatrix&) = default;

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * blocks_ + b;
  }

  int blocks_ = 0;
  std::vector<int> entries_;
};

// Ensemble parameters: block sizes and the connectivity matrix.
struct BlockModel {
  std::vector<int> sizes;
  ConnectivityMatrix connectivity;

  int blocks() const { return static_cast<int>(sizes.size()); }
  int vertex_count() const;
  bool equal_sizes() const;
  // First vertex id of each block; vertices are laid out block by block.
  std::vector<int> offsets() const;

  // Two blocks of n / 2 vertices each with c = [c_in, c_out; c_out, c_in].
  static BlockModel Modular(int n, int c_in, int c_out);
};

// Per-vertex block labels, 0-based.
struct Partition {
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  int operator[](std::size_t i) const { return labels[i]; }
  friend bool operator==(const Partition&, const Partition&) = default;
};

using Edge = std::pair<int, int>;

// Simple undirected graph with optional ground-truth block labels.
class Graph {
 public:
  Graph() = default;
  // Edges are normalized to u < v and sorted. Throws std::invalid_argument on
  // self-loops, duplicates or out-of-range endpoints.
  Graph(int vertices, std::vector<Edge> edges, Partition labels = {});

  int vertex_count() const { return vertices_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int v) const;
  int degree(int v) const {
    return static_cast<int>(neighbors(v).size());
  }

  bool has_labels() const { return !labels_.labels.empty(); }
  const Partition& labels() const { return labels_; }
  void set_labels(Partition labels);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ &&
           a.labels_ == b.labels_;
  }

 private:
  int vertices_ = 0;
  std::vector<Edge> edges_;
  Partition labels_;
  // CSR adjacency.
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every violated feasibility condition, as human-readable text. Empty iff the
// ensemble is non-empty.
std::vector<std::string> validate_model(const BlockModel& model);

// Samples one graph of the ensemble: a c_aa-regular graph inside each block
// and a (c_ab, c_ba)-biregular graph between each pair of blocks. Vertices
// are numbered block by block. Throws std::invalid_argument for an invalid
// model and SamplerError when a component cannot be made simple.
Graph sample(const BlockModel& model, std::uint64_t seed);

// True iff every vertex has exactly c(g_i, b) neighbors in each block b.
// Throws DimensionError if the labels disagree with the model's sizes.
bool verify_equitable(const Graph& graph, const BlockModel& model);

// Relabels vertices by a seeded random permutation, carrying labels along.
// Hides the block layout the sampler produces.
Graph permute_vertices(const Graph& graph, std::uint64_t seed);

// Number of edges every sample of the model has.
std::int64_t expected_edge_count(const BlockModel& model);

}  // namespace equitable

#endif  // EQUITABLE_ENSEMBLE_H_
