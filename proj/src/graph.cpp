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

#include "gnphys/graph.hpp"

#include <stdexcept>
#include <string>

namespace gnphys {

void Graph::validate() const {
  if (global.rows() != 1 && global.numel() != 0) {
    throw std::invalid_argument("Graph: global must be a single row, got " +
                                global.shape_str());
  }
  if (senders.size() != receivers.size() ||
      static_cast<int>(senders.size()) != edges.rows()) {
    throw std::invalid_argument("Graph: edge feature rows and index counts disagree");
  }
  for (std::size_t j = 0; j < senders.size(); ++j) {
    if (senders[j] < 0 || senders[j] >= num_nodes() || receivers[j] < 0 ||
        receivers[j] >= num_nodes()) {
      throw std::invalid_argument("Graph: edge " + std::to_string(j) +
                                  " references node out of range");
    }
  }
}

bool Graph::same_structure(const Graph& o) const {
  return num_nodes() == o.num_nodes() && senders == o.senders &&
         receivers == o.receivers;
}

bool graphs_equal(const Graph& a, const Graph& b) {
  return a.same_structure(b) && a.global.shape() == b.global.shape() &&
         a.nodes.shape() == b.nodes.shape() && a.edges.shape() == b.edges.shape() &&
         a.global.vec_data() == b.global.vec_data() &&
         a.nodes.vec_data() == b.nodes.vec_data() &&
         a.edges.vec_data() == b.edges.vec_data();
}

namespace {

Tensor hcat(const Tensor& a, const Tensor& b) {
  Tensor out({a.rows(), a.cols() + b.cols()});
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out.at(r, c) = a.at(r, c);
    for (int c = 0; c < b.cols(); ++c) out.at(r, a.cols() + c) = b.at(r, c);
  }
  return out;
}

std::pair<Tensor, Tensor> hsplit(const Tensor& t, int w) {
  if (w < 0 || w > t.cols()) {
    throw std::invalid_argument("graph_split: width " + std::to_string(w) +
                                " exceeds features " + t.shape_str());
  }
  Tensor left({t.rows(), w});
  Tensor right({t.rows(), t.cols() - w});
  for (int r = 0; r < t.rows(); ++r) {
    for (int c = 0; c < w; ++c) left.at(r, c) = t.at(r, c);
    for (int c = w; c < t.cols(); ++c) right.at(r, c - w) = t.at(r, c);
  }
  return {std::move(left), std::move(right)};
}

}  // namespace

Graph graph_concat(const Graph& a, const Graph& b) {
  if (!a.same_structure(b)) {
    throw std::invalid_argument("graph_concat: graphs differ in structure");
  }
  Graph out;
  out.global = hcat(a.global, b.global);
  out.nodes = hcat(a.nodes, b.nodes);
  out.edges = hcat(a.edges, b.edges);
  out.senders = a.senders;
  out.receivers = a.receivers;
  return out;
}

std::pair<Graph, Graph> graph_split(const Graph& g, const GraphWidths& widths) {
  auto [gl, gr] = hsplit(g.global, widths.global);
  auto [nl, nr] = hsplit(g.nodes, widths.node);
  auto [el, er] = hsplit(g.edges, widths.edge);
  Graph left{std::move(gl), std::move(nl), std::move(el), g.senders, g.receivers};
  Graph right{std::move(gr), std::move(nr), std::move(er), g.senders, g.receivers};
  return {std::move(left), std::move(right)};
}

GraphBatch batch_graphs(const std::vector<Graph>& graphs) {
  if (graphs.empty()) throw std::invalid_argument("batch_graphs: empty list");
  const int wg = graphs[0].global_width();
  const int wn = graphs[0].node_width();
  const int we = graphs[0].edge_width();
  int total_nodes = 0, total_edges = 0;
  for (const Graph& g : graphs) {
    if (g.global_width() != wg || g.node_width() != wn || g.edge_width() != we) {
      throw std::invalid_argument("batch_graphs: feature width mismatch");
    }
    total_nodes += g.num_nodes();
    total_edges += g.num_edges();
  }

  GraphBatch b;
  b.globals = Tensor({static_cast<int>(graphs.size()), wg});
  b.nodes = Tensor({total_nodes, wn});
  b.edges = Tensor({total_edges, we});
  b.node_offsets = {0};
  b.edge_offsets = {0};
  int node_off = 0, edge_off = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    for (int c = 0; c < wg; ++c) b.globals.at(static_cast<int>(i), c) = g.global.at(0, c);
    for (int r = 0; r < g.num_nodes(); ++r) {
      for (int c = 0; c < wn; ++c) b.nodes.at(node_off + r, c) = g.nodes.at(r, c);
      b.node_gid.push_back(static_cast<int>(i));
    }
    for (int j = 0; j < g.num_edges(); ++j) {
      for (int c = 0; c < we; ++c) b.edges.at(edge_off + j, c) = g.edges.at(j, c);
      b.senders.push_back(g.senders[j] + node_off);
      b.receivers.push_back(g.receivers[j] + node_off);
      b.edge_gid.push_back(static_cast<int>(i));
    }
    node_off += g.num_nodes();
    edge_off += g.num_edges();
    b.node_offsets.push_back(node_off);
    b.edge_offsets.push_back(edge_off);
  }
  return b;
}

std::vector<Graph> unbatch(const GraphBatch& batch) {
  std::vector<Graph> out;
  const int wg = batch.globals.cols();
  const int wn = batch.nodes.cols();
  const int we = batch.edges.cols();
  for (int i = 0; i < batch.num_graphs(); ++i) {
    const int n0 = batch.node_offsets[i], n1 = batch.node_offsets[i + 1];
    const int e0 = batch.edge_offsets[i], e1 = batch.edge_offsets[i + 1];
    Graph g;
    g.global = Tensor({1, wg});
    for (int c = 0; c < wg; ++c) g.global.at(0, c) = batch.globals.at(i, c);
    g.nodes = Tensor({n1 - n0, wn});
    for (int r = n0; r < n1; ++r)
      for (int c = 0; c < wn; ++c) g.nodes.at(r - n0, c) = batch.nodes.at(r, c);
    g.edges = Tensor({e1 - e0, we});
    for (int j = e0; j < e1; ++j) {
      for (int c = 0; c < we; ++c) g.edges.at(j - e0, c) = batch.edges.at(j, c);
      g.senders.push_back(batch.senders[j] - n0);
      g.receivers.push_back(batch.receivers[j] - n0);
    }
    out.push_back(std::move(g));
  }
  return out;
}

Graph permute_nodes(const Graph& g, const std::vector<int>& perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permute_nodes: permutation size mismatch");
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) {
      throw std::invalid_argument("permute_nodes: not a permutation");
    }
    seen[p] = true;
  }
  Graph out;
  out.global = g.global;
  out.nodes = Tensor({n, g.node_width()});
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < g.node_width(); ++c)
      out.nodes.at(perm[i], c) = g.nodes.at(i, c);
  out.edges = g.edges;
  out.senders.reserve(g.num_edges());
  out.receivers.reserve(g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) {
    out.senders.push_back(perm[g.senders[j]]);
    out.receivers.push_back(perm[g.receivers[j]]);
  }
  return out;
}

}  // namespace gnphys
