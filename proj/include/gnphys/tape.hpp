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

#ifndef GNPHYS_TAPE_H_
#define GNPHYS_TAPE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gnphys/tensor.hpp"

namespace gnphys {

// Handle to a node on a Tape. Only meaningful together with the tape that
// produced it.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

enum class OpKind : std::uint8_t {
  kLeaf,
  kMatmul,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kRelu,
  kSigmoid,
  kTanh,
  kSqrt,
  kSquare,
  kAbs,
  kAcos,
  kScalarMul,
  kConcatCols,
  kVstack,
  kSliceCols,
  kSliceRows,
  kSumAll,
  kMeanAll,
  kRowSum,
  kRepeatRows,
  kRepeatCols,
  kAddRowvec,
  kMulRowvec,
  kGatherRows,
  kScatterSumRows,
};

const char* op_name(OpKind kind);

struct TapeNode {
  OpKind kind = OpKind::kLeaf;
  std::vector<int> inputs;
  Tensor value;
  Tensor grad;  // empty until backward touches this node
  bool requires_grad = false;
  // Op-specific payload: slice offsets, repeat counts, scatter target size.
  int i0 = 0;
  int i1 = 0;
  double scalar = 0.0;
  std::vector<int> indices;  // gather/scatter row maps
};

// Reverse-mode automatic differentiation record. Define-by-run: every op
// computes its forward value immediately and appends a node, so the node
// list is always in topological order. A tape is single-threaded; build a
// fresh one per training step / planning iteration.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves. Gradient-tracked leaves receive accumulated gradients in
  // backward(); constants never do.
  Var leaf(Tensor v, bool requires_grad = true);
  Var constant(Tensor v) { return leaf(std::move(v), false); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);  // elementwise
  Var div(Var a, Var b);  // elementwise
  Var relu(Var x);
  Var sigmoid(Var x);
  Var tanh_(Var x);
  Var sqrt_(Var x);
  Var square(Var x);
  Var abs_(Var x);
  Var acos_(Var x);
  Var scalar_mul(Var x, double c);
  Var neg(Var x) { return scalar_mul(x, -1.0); }

  // Concatenate along the last axis (feature concat). All rank-1, or all
  // rank-2 with equal row counts.
  Var concat_cols(const std::vector<Var>& xs);
  // Stack rank-2 blocks vertically (equal column counts).
  Var vstack(const std::vector<Var>& xs);
  Var slice_cols(Var x, int begin, int width);
  Var slice_rows(Var x, int begin, int count);

  Var sum_all(Var x);   // -> scalar
  Var mean_all(Var x);  // -> scalar
  Var row_sum(Var x);   // [N x w] -> [N x 1]

  Var repeat_rows(Var x, int n);  // [1 x w] -> [n x w]
  Var repeat_cols(Var x, int w);  // [N x 1] -> [N x w]
  Var add_rowvec(Var x, Var b);   // broadcast b over rows of x
  Var mul_rowvec(Var x, Var s);   // broadcast s over rows of x

  Var gather_rows(Var x, std::vector<int> idx);
  // out[k] = sum of x rows j with idx[j] == k; rows never referenced by idx
  // aggregate the zero vector. Summation runs in ascending j for
  // reproducibility.
  Var scatter_sum_rows(Var x, std::vector<int> idx, int num_rows);

  // Accumulate d(loss)/d(node) for every gradient-tracked node reachable
  // from `loss`. Rejects non-scalar losses.
  void backward(Var loss);

  const Tensor& value(Var v) const { return node(v).value; }
  // Gradient of the last backward() w.r.t. v; zeros if v was off-path.
  Tensor grad(Var v) const;

  // Re-execute every non-leaf node from its inputs, in place. Same inputs
  // and parameters give bit-identical values.
  void recompute();

  std::size_t size() const { return nodes_.size(); }
  void reset() { nodes_.clear(); }

  const TapeNode& node(Var v) const;
  TapeNode& node(Var v);

 private:
  Var push(TapeNode n);
  void check_same_shape(const char* op, Var a, Var b) const;
  void compute_forward(TapeNode& n) const;

  std::vector<TapeNode> nodes_;
};

}  // namespace gnphys

#endif  // GNPHYS_TAPE_H_
