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

#include "equitable/graph_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace equitable {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_ints(const std::string& text, char separator) {
  std::vector<int> values;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, separator)) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw FormatError("not an integer: '" + item + "'");
    }
    if (used != item.size()) throw FormatError("not an integer: '" + item + "'");
    values.push_back(value);
  }
  return values;
}

int header_field(const std::string& line, const std::string& key) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) throw FormatError("header lacks " + key + "=");
  std::istringstream is(line.substr(pos + key.size() + 1));
  int value = 0;
  if (!(is >> value)) throw FormatError("bad value for " + key);
  return value;
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& graph) {
  int blocks = 0;
  for (int label : graph.labels().labels) blocks = std::max(blocks, label + 1);
  out << "# n=" << graph.vertex_count() << " m=" << blocks << "\n";
  if (graph.has_labels()) {
    out << "# labels=";
    const auto& labels = graph.labels().labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << ',';
      out << labels[i] + 1;
    }
    out << "\n";
  }
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  int vertices = -1;
  Partition labels;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("n=") != std::string::npos && vertices < 0) {
        vertices = header_field(line, "n");
      } else if (const auto pos = line.find("labels="); pos != std::string::npos) {
        for (int label : parse_ints(line.substr(pos + 7), ',')) {
          if (label < 1) throw FormatError("labels must be 1-based");
          labels.labels.push_back(label - 1);
        }
      }
      continue;
    }
    std::istringstream is(line);
    int u = 0, v = 0;
    if (!(is >> u >> v)) throw FormatError("bad edge line: '" + line + "'");
    edges.emplace_back(u, v);
  }
  if (vertices < 0) throw FormatError("missing '# n=<N> m=<m>' header");
  try {
    return Graph(vertices, std::move(edges), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_model(std::ostream& out, const BlockModel& model) {
  out << "sizes =";
  for (int n : model.sizes) out << ' ' << n;
  out << '\n';
  for (int a = 0; a < model.connectivity.blocks(); ++a) {
    out << "row =";
    for (int b = 0; b < model.connectivity.blocks(); ++b)
      out << ' ' << model.connectivity(a, b);
    out << '\n';
  }
}

BlockModel read_model(std::istream& in) {
  BlockModel model;
  std::vector<std::vector<int>> rows;
  bool have_sizes = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key == "sizes") {
      model.sizes = parse_ints(value, ' ');
      have_sizes = true;
    } else if (key == "row") {
      rows.push_back(parse_ints(value, ' '));
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  if (!have_sizes) throw FormatError("model lacks 'sizes'");
  if (rows.empty()) throw FormatError("model lacks connectivity rows");
  try {
    model.connectivity = ConnectivityMatrix::FromRows(rows);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return model;
}

BlockModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file " + path);
  return read_model(in);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file " + path);
  return read_edge_list(in);
}

}  // namespace equitable
