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

#include "equitable/ensemble.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "equitable/rng.h"

namespace equitable {

ConnectivityMatrix::ConnectivityMatrix(int blocks)
    : blocks_(blocks),
      entries_(static_cast<std::size_t>(blocks) * blocks, 0) {
  if (blocks < 1) throw std::invalid_argument("block count must be positive");
}

ConnectivityMatrix::ConnectivityMatrix(
    std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> copy;
  for (const auto& row : rows) copy.emplace_back(row);
  *this = FromRows(copy);
}

ConnectivityMatrix ConnectivityMatrix::FromRows(
    const std::vector<std::vector<int>>& rows) {
  ConnectivityMatrix c(static_cast<int>(rows.size()));
  for (int a = 0; a < c.blocks_; ++a) {
    if (static_cast<int>(rows[a].size()) != c.blocks_) {
      throw std::invalid_argument("connectivity matrix must be square");
    }
    for (int b = 0; b < c.blocks_; ++b) c(a, b) = rows[a][b];
  }
  return c;
}

int ConnectivityMatrix::row_sum(int a) const {
  int total = 0;
  for (int b = 0; b < blocks_; ++b) total += (*this)(a, b);
  return total;
}

bool ConnectivityMatrix::symmetric() const {
  for (int a = 0; a < blocks_; ++a)
    for (int b = a + 1; b < blocks_; ++b)
      if ((*this)(a, b) != (*this)(b, a)) return false;
  return true;
}

int BlockModel::vertex_count() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

bool BlockModel::equal_sizes() const {
  return std::adjacent_find(sizes.begin(), sizes.end(),
                            std::not_equal_to<>()) == sizes.end();
}

std::vector<int> BlockModel::offsets() const {
  std::vector<int> out(sizes.size(), 0);
  for (std::size_t a = 1; a < sizes.size(); ++a)
    out[a] = out[a - 1] + sizes[a - 1];
  return out;
}

BlockModel BlockModel::Modular(int n, int c_in, int c_out) {
  if (n % 2 != 0) throw std::invalid_argument("modular model needs even n");
  return BlockModel{{n / 2, n / 2}, {{c_in, c_out}, {c_out, c_in}}};
}

Graph::Graph(int vertices, std::vector<Edge> edges, Partition labels)
    : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices < 0) throw std::invalid_argument("negative vertex count");
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self-loop");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }

  offsets_.assign(static_cast<std::size_t>(vertices) + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
  set_labels(std::move(labels));
}

std::span<const int> Graph::neighbors(int v) const {
  return std::span<const int>(adjacency_).subspan(
      offsets_[v], offsets_[v + 1] - offsets_[v]);
}

void Graph::set_labels(Partition labels) {
  if (!labels.labels.empty() &&
      static_cast<int>(labels.size()) != vertices_) {
    throw DimensionError("label count does not match vertex count");
  }
  labels_ = std::move(labels);
}

std::vector<std::string> validate_model(const BlockModel& model) {
  std::vector<std::string> issues;
  const auto& c = model.connectivity;
  const int m = model.blocks();
  if (m == 0) {
    issues.push_back("model has no blocks");
    return issues;
  }
  if (c.blocks() != m) {
    std::ostringstream os;
    os << "connectivity matrix is " << c.blocks() << "x" << c.blocks()
       << " but there are " << m << " blocks";
    issues.push_back(os.str());
    return issues;
  }
  for (int a = 0; a < m; ++a) {
    if (model.sizes[a] <= 0) {
      issues.push_back("block " + std::to_string(a) + " has non-positive size");
    }
  }
  if (!issues.empty()) return issues;

  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (c(a, b) < 0) {
        std::ostringstream os;
        os << "negative entry c(" << a << "," << b << ") = " << c(a, b);
        issues.push_back(os.str());
      }
    }
  }
  for (int a = 0; a < m; ++a) {
    const std::int64_t n_a = model.sizes[a];
    const int c_aa = c(a, a);
    if (c_aa > n_a - 1) {
      std::ostringstream os;
      os << "block " << a << ": intra-block degree " << c_aa
         << " exceeds size - 1 = " << n_a - 1;
      issues.push_back(os.str());
    }
    if ((n_a * c_aa) % 2 != 0) {
      std::ostringstream os;
      os << "block " << a << ": stub count " << n_a << "*" << c_aa
         << " is odd";
      issues.push_back(os.str());
    }
    for (int b = a + 1; b < m; ++b) {
      const std::int64_t n_b = model.sizes[b];
      if (n_a * c(a, b) != n_b * c(b, a)) {
        std::ostringstream os;
        os << "blocks " << a << "," << b << ": edge balance " << n_a << "*"
           << c(a, b) << " != " << n_b << "*" << c(b, a);
        issues.push_back(os.str());
      }
    }
    for (int b = 0; b < m; ++b) {
      if (b != a && c(a, b) > model.sizes[b]) {
        std::ostringstream os;
        os << "blocks " << a << "," << b << ": degree " << c(a, b)
           << " exceeds target block size " << model.sizes[b];
        issues.push_back(os.str());
      }
    }
  }
  return issues;
}

std::int64_t expected_edge_count(const BlockModel& model) {
  std::int64_t twice = 0;
  for (int a = 0; a < model.blocks(); ++a) {
    twice += static_cast<std::int64_t>(model.sizes[a]) *
             model.connectivity.row_sum(a);
  }
  return twice / 2;
}

namespace {

constexpr int kMaxRejections = 1000;

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

bool is_simple(const std::vector<Edge>& edges) {
  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u == v) return false;
    keys.push_back(edge_key(u, v));
  }
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

// Stub matching inside one block: every vertex gets `degree` stubs and a
// uniformly shuffled stub list is paired consecutively.
std::vector<Edge> match_regular(int first, int count, int degree, Rng& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(count) * degree);
  for (int v = first; v < first + count; ++v)
    for (int k = 0; k < degree; ++k) stubs.push_back(v);
  rng.shuffle(std::span<int>(stubs));
  std::vector<Edge> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
    edges.emplace_back(stubs[i], stubs[i + 1]);
  return edges;
}

// Stub matching between two blocks. The first endpoint of every edge lies in
// block a, the second in block b.
std::vector<Edge> match_biregular(int first_a, int count_a, int degree_a,
                                  int first_b, int count_b, int degree_b,
                                  Rng& rng) {
  std::vector<int> stubs_a, stubs_b;
  for (int v = first_a; v < first_a + count_a; ++v)
    for (int k = 0; k < degree_a; ++k) stubs_a.push_back(v);
  for (int v = first_b; v < first_b + count_b; ++v)
    for (int k = 0; k < degree_b; ++k) stubs_b.push_back(v);
  rng.shuffle(std::span<int>(stubs_b));
  std::vector<Edge> edges;
  edges.reserve(stubs_a.size());
  for (std::size_t i = 0; i < stubs_a.size(); ++i)
    edges.emplace_back(stubs_a[i], stubs_b[i]);
  return edges;
}

// Removes self-loops and multi-edges with degree-preserving double-edge
// swaps. Each accepted swap strictly lowers the violation count. For a
// bipartite component the swap exchanges the second endpoints so both
// edges keep one endpoint per side.
bool repair(std::vector<Edge>& edges, bool bipartite, Rng& rng) {
  std::unordered_map<std::uint64_t, int> multiplicity;
  multiplicity.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) ++multiplicity[edge_key(u, v)];

  auto is_bad = [&](const Edge& e) {
    return e.first == e.second || multiplicity[edge_key(e.first, e.second)] > 1;
  };
  std::vector<std::size_t> worklist;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (is_bad(edges[i])) worklist.push_back(i);
  if (worklist.empty()) return true;
  if (edges.size() < 2) return false;

  const std::size_t budget = 200 * edges.size() + 10000;
  std::size_t attempts = 0;
  while (!worklist.empty()) {
    const std::size_t i = worklist.back();
    if (!is_bad(edges[i])) {
      worklist.pop_back();
      continue;
    }
    if (++attempts > budget) return false;
    std::size_t j = static_cast<std::size_t>(rng.below(edges.size() - 1));
    if (j >= i) ++j;
    const auto [u, v] = edges[i];
    const auto [x, y] = edges[j];
    Edge e1{u, y}, e2{x, v};
    if (!bipartite && rng.below(2) == 1) {
      e1 = {u, x};
      e2 = {v, y};
    }
    if (e1.first == e1.second || e2.first == e2.second) continue;
    const auto k1 = edge_key(e1.first, e1.second);
    const auto k2 = edge_key(e2.first, e2.second);
    if (k1 == k2) continue;
    auto found1 = multiplicity.find(k1);
    auto found2 = multiplicity.find(k2);
    if (found1 != multiplicity.end() && found1->second > 0) continue;
    if (found2 != multiplicity.end() && found2->second > 0) continue;

    --multiplicity[edge_key(u, v)];
    --multiplicity[edge_key(x, y)];
    ++multiplicity[k1];
    ++multiplicity[k2];
    edges[i] = e1;
    edges[j] = e2;
  }
  return true;
}

template <typename Draw>
std::vector<Edge> sample_component(Draw draw, bool bipartite, Rng& rng,
                                   const std::string& what) {
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    edges = draw();
    if (is_simple(edges)) return edges;
  }
  if (!repair(edges, bipartite, rng)) {
    throw SamplerError("could not make " + what + " simple within " +
                       std::to_string(kMaxRejections) +
                       " rejections and the swap-repair budget");
  }
  return edges;
}

}  // namespace

Graph sample(const BlockModel& model, std::uint64_t seed) {
  const auto issues = validate_model(model);
  if (!issues.empty()) {
    throw std::invalid_argument("invalid block model: " + issues.front());
  }
  Rng rng(seed);
  const int m = model.blocks();
  const auto& c = model.connectivity;
  const auto offsets = model.offsets();

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(expected_edge_count(model)));
  for (int a = 0; a < m; ++a) {
    if (c(a, a) == 0) continue;
    auto part = sample_component(
        [&] { return match_regular(offsets[a], model.sizes[a], c(a, a), rng); },
        false, rng, "the regular graph of block " + std::to_string(a));
    edges.insert(edges.end(), part.begin(), part.end());
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (c(a, b) == 0) continue;
      auto part = sample_component(
          [&] {
            return match_biregular(offsets[a], model.sizes[a], c(a, b),
                                   offsets[b], model.sizes[b], c(b, a), rng);
          },
          true, rng,
          "the biregular graph between blocks " + std::to_string(a) + " and " +
              std::to_string(b));
      edges.insert(edges.end(), part.begin(), part.end());
    }
  }

  Partition labels;
  labels.labels.reserve(model.vertex_count());
  for (int a = 0; a < m; ++a)
    labels.labels.insert(labels.labels.end(), model.sizes[a], a);
  return Graph(model.vertex_count(), std::move(edges), std::move(labels));
}

Graph permute_vertices(const Graph& graph, std::uint64_t seed) {
  const int n = graph.vertex_count();
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(image));
  std::vector<Edge> edges;
  edges.reserve(graph.edge_count());
  for (const auto& [u, v] : graph.edges()) edges.emplace_back(image[u], image[v]);
  Partition labels;
  if (graph.has_labels()) {
    labels.labels.resize(n);
    for (int v = 0; v < n; ++v) labels.labels[image[v]] = graph.labels()[v];
  }
  return Graph(n, std::move(edges), std::move(labels));
}

bool verify_equitable(const Graph& graph, const BlockModel& model) {
  const int m = model.blocks();
  if (graph.vertex_count() != model.vertex_count()) {
    throw DimensionError("graph has " + std::to_string(graph.vertex_count()) +
                         " vertices but the model has " +
                         std::to_string(model.vertex_count()));
  }
  if (!graph.has_labels()) throw DimensionError("graph carries no labels");
  std::vector<int> counts(m, 0);
  for (int label : graph.labels().labels) {
    if (label < 0 || label >= m) {
      throw DimensionError("label " + std::to_string(label) +
                           " outside the model's block range");
    }
    ++counts[label];
  }
  if (counts != model.sizes) {
    throw DimensionError("label counts disagree with block sizes");
  }

  const auto& labels = graph.labels();
  std::vector<int> degrees(m);
  for (int v = 0; v < graph.vertex_count(); ++v) {
    std::fill(degrees.begin(), degrees.end(), 0);
    for (int w : graph.neighbors(v)) ++degrees[labels[w]];
    const int a = labels[v];
    for (int b = 0; b < m; ++b)
      if (degrees[b] != model.connectivity(a, b)) return false;
  }
  return true;
}

}  // namespace equitable
