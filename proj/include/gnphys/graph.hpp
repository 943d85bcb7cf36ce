// Copyright 2026 The gnphys Authors
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

#ifndef GNPHYS_GRAPH_H_
#define GNPHYS_GRAPH_H_

#include <vector>

#include "gnphys/tensor.hpp"

namespace gnphys {

// Directed attributed graph: one global feature row, per-node feature rows,
// per-edge feature rows with sender/receiver node indices. Feature widths
// are uniform within each part; zero widths are legal. Edges keep a stable,
// explicit order so that sum-aggregations are reproducible.
struct Graph {
  Tensor global;  // [1 x wg]
  Tensor nodes;   // [Nn x wn]
  Tensor edges;   // [Ne x we]
  std::vector<int> senders;
  std::vector<int> receivers;

  int num_nodes() const { return nodes.rows(); }
  int num_edges() const { return static_cast<int>(senders.size()); }
  int global_width() const { return global.cols(); }
  int node_width() const { return nodes.cols(); }
  int edge_width() const { return edges.cols(); }

  // Throws if indices are out of range or widths are inconsistent.
  void validate() const;

  bool same_structure(const Graph& o) const;
};

struct GraphWidths {
  int global = 0;
  int node = 0;
  int edge = 0;
};

// Disjoint union of several graphs: globals stacked one row per example,
// node/edge rows concatenated with edge indices offset by cumulative node
// counts. Offsets allow exact splitting back into the originals.
struct GraphBatch {
  Tensor globals;  // [B x wg]
  Tensor nodes;    // [sum Nn x wn]
  Tensor edges;    // [sum Ne x we]
  std::vector<int> senders;
  std::vector<int> receivers;
  std::vector<int> node_offsets;  // size B+1
  std::vector<int> edge_offsets;  // size B+1
  std::vector<int> node_gid;      // graph id per node row
  std::vector<int> edge_gid;      // graph id per edge row

  int num_graphs() const { return globals.rows(); }
};

bool graphs_equal(const Graph& a, const Graph& b);  // bitwise

// Feature-wise concatenation of two structurally identical graphs; a's
// features come first.
Graph graph_concat(const Graph& a, const Graph& b);

// Inverse of graph_concat: the left graph takes the leading `widths`
// columns, the right graph the remainder. Structure is copied to both.
std::pair<Graph, Graph> graph_split(const Graph& g, const GraphWidths& widths);

GraphBatch batch_graphs(const std::vector<Graph>& graphs);
std::vector<Graph> unbatch(const GraphBatch& batch);

// Reorders nodes so that old node i becomes node perm[i]; edge indices are
// remapped accordingly.
Graph permute_nodes(const Graph& g, const std::vector<int>& perm);

}  // namespace gnphys

#endif  // GNPHYS_GRAPH_H_
