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

#ifndef EQUITABLE_GRAPH_IO_H_
#define EQUITABLE_GRAPH_IO_H_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "equitable/ensemble.h"

namespace equitable {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge-list format:
//   # n=<vertices> m=<blocks>
//   # labels=<comma-separated 1-based block ids>   (only when labelled)
//   u v                                            (0-based, one per line)
void write_edge_list(std::ostream& out, const Graph& graph);
Graph read_edge_list(std::istream& in);

// Model format, one "key = value" per line, '#' starts a comment:
//   sizes = 500 500
//   row = 16 4
//   row = 4 16
void write_model(std::ostream& out, const BlockModel& model);
BlockModel read_model(std::istream& in);

BlockModel load_model(const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace equitable

#endif  // EQUITABLE_GRAPH_IO_H_
