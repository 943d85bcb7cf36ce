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

#include "gnphys/tape.hpp"

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace gnphys {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double clamp_unit(double x) {
  const double lim = 1.0 - 1e-12;
  if (x > lim) return lim;
  if (x < -lim) return -lim;
  return x;
}

}  // namespace

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatmul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kDiv: return "div";
    case OpKind::kRelu: return "relu";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSqrt: return "sqrt";
    case OpKind::kSquare: return "square";
    case OpKind::kAbs: return "abs";
    case OpKind::kAcos: return "acos";
    case OpKind::kScalarMul: return "scalar_mul";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kVstack: return "vstack";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kSliceRows: return "slice_rows";
    case OpKind::kSumAll: return "sum_all";
    case OpKind::kMeanAll: return "mean_all";
    case OpKind::kRowSum: return "row_sum";
    case OpKind::kRepeatRows: return "repeat_rows";
    case OpKind::kRepeatCols: return "repeat_cols";
    case OpKind::kAddRowvec: return "add_rowvec";
    case OpKind::kMulRowvec: return "mul_rowvec";
    case OpKind::kGatherRows: return "gather_rows";
    case OpKind::kScatterSumRows: return "scatter_sum_rows";
  }
  return "?";
}

const TapeNode& Tape::node(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
    throw std::invalid_argument("Tape: invalid Var id " + std::to_string(v.id));
  }
  return nodes_[v.id];
}

TapeNode& Tape::node(Var v) {
  return const_cast<TapeNode&>(static_cast<const Tape*>(this)->node(v));
}

Var Tape::push(TapeNode n) {
  if (n.kind != OpKind::kLeaf) {
    n.requires_grad = false;
    for (int in : n.inputs) {
      if (nodes_[in].requires_grad) {
        n.requires_grad = true;
        break;
      }
    }
    compute_forward(n);
  }
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::check_same_shape(const char* op, Var a, Var b) const {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (!ta.same_shape(tb)) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                ta.shape_str() + " vs " + tb.shape_str());
  }
}

Var Tape::leaf(Tensor v, bool requires_grad) {
  TapeNode n;
  n.kind = OpKind::kLeaf;
  n.value = std::move(v);
  n.requires_grad = requires_grad;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (ta.rank() != 2 || tb.rank() != 2 || ta.cols() != tb.rows()) {
    throw std::invalid_argument("matmul: shape mismatch " + ta.shape_str() +
                                " vs " + tb.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kMatmul;
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  check_same_shape("add", a, b);
  TapeNode n;
  n.kind = OpKind::kAdd;
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  check_same_shape("sub", a, b);
  TapeNode n;
  n.kind = OpKind::kSub;
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
  check_same_shape("mul", a, b);
  TapeNode n;
  n.kind = OpKind::kMul;
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::div(Var a, Var b) {
  check_same_shape("div", a, b);
  TapeNode n;
  n.kind = OpKind::kDiv;
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

#define GNPHYS_UNARY(method, kindval)        \
  Var Tape::method(Var x) {                  \
    TapeNode n;                              \
    n.kind = kindval;                        \
    n.inputs = {x.id};                       \
    return push(std::move(n));               \
  }

GNPHYS_UNARY(relu, OpKind::kRelu)
GNPHYS_UNARY(sigmoid, OpKind::kSigmoid)
GNPHYS_UNARY(tanh_, OpKind::kTanh)
GNPHYS_UNARY(sqrt_, OpKind::kSqrt)
GNPHYS_UNARY(square, OpKind::kSquare)
GNPHYS_UNARY(abs_, OpKind::kAbs)
GNPHYS_UNARY(acos_, OpKind::kAcos)

#undef GNPHYS_UNARY

Var Tape::scalar_mul(Var x, double c) {
  TapeNode n;
  n.kind = OpKind::kScalarMul;
  n.inputs = {x.id};
  n.scalar = c;
  return push(std::move(n));
}

Var Tape::concat_cols(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const int rank0 = node(xs[0]).value.rank();
  const int rows0 = node(xs[0]).value.rows();
  for (Var v : xs) {
    const Tensor& t = node(v).value;
    if (t.rank() != rank0 || (rank0 == 2 && t.rows() != rows0) || rank0 == 0) {
      throw std::invalid_argument("concat_cols: shape mismatch " +
                                  node(xs[0]).value.shape_str() + " vs " +
                                  t.shape_str());
    }
  }
  TapeNode n;
  n.kind = OpKind::kConcatCols;
  for (Var v : xs) n.inputs.push_back(v.id);
  return push(std::move(n));
}

Var Tape::vstack(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("vstack: no inputs");
  const int cols0 = node(xs[0]).value.cols();
  for (Var v : xs) {
    const Tensor& t = node(v).value;
    if (t.rank() != 2 || t.cols() != cols0) {
      throw std::invalid_argument("vstack: shape mismatch " +
                                  node(xs[0]).value.shape_str() + " vs " +
                                  t.shape_str());
    }
  }
  TapeNode n;
  n.kind = OpKind::kVstack;
  for (Var v : xs) n.inputs.push_back(v.id);
  return push(std::move(n));
}

Var Tape::slice_cols(Var x, int begin, int width) {
  const Tensor& t = node(x).value;
  if (t.rank() != 2 || begin < 0 || width < 0 || begin + width > t.cols()) {
    throw std::invalid_argument("slice_cols: out of range [" +
                                std::to_string(begin) + ", " +
                                std::to_string(begin + width) + ") of " +
                                t.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kSliceCols;
  n.inputs = {x.id};
  n.i0 = begin;
  n.i1 = width;
  return push(std::move(n));
}

Var Tape::slice_rows(Var x, int begin, int count) {
  const Tensor& t = node(x).value;
  if (t.rank() != 2 || begin < 0 || count < 0 || begin + count > t.rows()) {
    throw std::invalid_argument("slice_rows: out of range [" +
                                std::to_string(begin) + ", " +
                                std::to_string(begin + count) + ") of " +
                                t.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kSliceRows;
  n.inputs = {x.id};
  n.i0 = begin;
  n.i1 = count;
  return push(std::move(n));
}

Var Tape::sum_all(Var x) {
  TapeNode n;
  n.kind = OpKind::kSumAll;
  n.inputs = {x.id};
  return push(std::move(n));
}

Var Tape::mean_all(Var x) {
  if (node(x).value.numel() == 0) {
    throw std::invalid_argument("mean_all: empty tensor");
  }
  TapeNode n;
  n.kind = OpKind::kMeanAll;
  n.inputs = {x.id};
  return push(std::move(n));
}

Var Tape::row_sum(Var x) {
  if (node(x).value.rank() != 2) {
    throw std::invalid_argument("row_sum: expected rank-2, got " +
                                node(x).value.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kRowSum;
  n.inputs = {x.id};
  return push(std::move(n));
}

Var Tape::repeat_rows(Var x, int count) {
  const Tensor& t = node(x).value;
  if (t.rows() != 1 || t.rank() == 0 || count < 0) {
    throw std::invalid_argument("repeat_rows: expected single row, got " +
                                t.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kRepeatRows;
  n.inputs = {x.id};
  n.i0 = count;
  return push(std::move(n));
}

Var Tape::repeat_cols(Var x, int width) {
  const Tensor& t = node(x).value;
  if (t.rank() != 2 || t.cols() != 1 || width < 0) {
    throw std::invalid_argument("repeat_cols: expected [N x 1], got " +
                                t.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kRepeatCols;
  n.inputs = {x.id};
  n.i0 = width;
  return push(std::move(n));
}

Var Tape::add_rowvec(Var x, Var b) {
  const Tensor& tx = node(x).value;
  const Tensor& tb = node(b).value;
  if (tx.rank() != 2 || tb.rows() != 1 || tb.cols() != tx.cols()) {
    throw std::invalid_argument("add_rowvec: shape mismatch " + tx.shape_str() +
                                " vs " + tb.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kAddRowvec;
  n.inputs = {x.id, b.id};
  return push(std::move(n));
}

Var Tape::mul_rowvec(Var x, Var s) {
  const Tensor& tx = node(x).value;
  const Tensor& ts = node(s).value;
  if (tx.rank() != 2 || ts.rows() != 1 || ts.cols() != tx.cols()) {
    throw std::invalid_argument("mul_rowvec: shape mismatch " + tx.shape_str() +
                                " vs " + ts.shape_str());
  }
  TapeNode n;
  n.kind = OpKind::kMulRowvec;
  n.inputs = {x.id, s.id};
  return push(std::move(n));
}

Var Tape::gather_rows(Var x, std::vector<int> idx) {
  const Tensor& t = node(x).value;
  if (t.rank() != 2) {
    throw std::invalid_argument("gather_rows: expected rank-2, got " +
                                t.shape_str());
  }
  for (int i : idx) {
    if (i < 0 || i >= t.rows()) {
      throw std::invalid_argument("gather_rows: index " + std::to_string(i) +
                                  " out of range for " + t.shape_str());
    }
  }
  TapeNode n;
  n.kind = OpKind::kGatherRows;
  n.inputs = {x.id};
  n.indices = std::move(idx);
  return push(std::move(n));
}

Var Tape::scatter_sum_rows(Var x, std::vector<int> idx, int num_rows) {
  const Tensor& t = node(x).value;
  if (t.rank() != 2 || static_cast<int>(idx.size()) != t.rows()) {
    throw std::invalid_argument("scatter_sum_rows: got " +
                                std::to_string(idx.size()) + " indices for " +
                                t.shape_str());
  }
  for (int i : idx) {
    if (i < 0 || i >= num_rows) {
      throw std::invalid_argument("scatter_sum_rows: index " +
                                  std::to_string(i) + " out of range [0, " +
                                  std::to_string(num_rows) + ")");
    }
  }
  TapeNode n;
  n.kind = OpKind::kScatterSumRows;
  n.inputs = {x.id};
  n.indices = std::move(idx);
  n.i0 = num_rows;
  return push(std::move(n));
}

void Tape::compute_forward(TapeNode& n) const {
  auto in = [&](int k) -> const Tensor& { return nodes_[n.inputs[k]].value; };
  switch (n.kind) {
    case OpKind::kLeaf:
      break;
    case OpKind::kMatmul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      n.value = Tensor({a.rows(), b.cols()});
      if (a.rows() > 0 && b.cols() > 0) {
        ConstMap ma(a.data(), a.rows(), a.cols());
        ConstMap mb(b.data(), b.rows(), b.cols());
        MutMap mc(n.value.data(), a.rows(), b.cols());
        if (a.cols() > 0) {
          mc.noalias() = ma * mb;
        } else {
          mc.setZero();
        }
      }
      break;
    }
    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kMul:
    case OpKind::kDiv: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      n.value = Tensor(a.shape());
      const std::size_t m = a.numel();
      for (std::size_t i = 0; i < m; ++i) {
        switch (n.kind) {
          case OpKind::kAdd: n.value[i] = a[i] + b[i]; break;
          case OpKind::kSub: n.value[i] = a[i] - b[i]; break;
          case OpKind::kMul: n.value[i] = a[i] * b[i]; break;
          default: n.value[i] = a[i] / b[i]; break;
        }
      }
      break;
    }
    case OpKind::kRelu:
    case OpKind::kSigmoid:
    case OpKind::kTanh:
    case OpKind::kSqrt:
    case OpKind::kSquare:
    case OpKind::kAbs:
    case OpKind::kAcos:
    case OpKind::kScalarMul: {
      const Tensor& a = in(0);
      n.value = Tensor(a.shape());
      const std::size_t m = a.numel();
      for (std::size_t i = 0; i < m; ++i) {
        const double x = a[i];
        switch (n.kind) {
          case OpKind::kRelu: n.value[i] = x > 0.0 ? x : 0.0; break;
          case OpKind::kSigmoid: n.value[i] = stable_sigmoid(x); break;
          case OpKind::kTanh: n.value[i] = std::tanh(x); break;
          case OpKind::kSqrt: n.value[i] = std::sqrt(x); break;
          case OpKind::kSquare: n.value[i] = x * x; break;
          case OpKind::kAbs: n.value[i] = std::abs(x); break;
          case OpKind::kAcos: n.value[i] = std::acos(clamp_unit(x)); break;
          default: n.value[i] = n.scalar * x; break;
        }
      }
      break;
    }
    case OpKind::kConcatCols: {
      const bool rank1 = in(0).rank() == 1;
      if (rank1) {
        int total = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) total += in(k).cols();
        n.value = Tensor({total});
        int off = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
          const Tensor& a = in(k);
          for (int c = 0; c < a.cols(); ++c) n.value[off + c] = a[c];
          off += a.cols();
        }
      } else {
        const int rows = in(0).rows();
        int total = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) total += in(k).cols();
        n.value = Tensor({rows, total});
        int off = 0;
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
          const Tensor& a = in(k);
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < a.cols(); ++c) n.value.at(r, off + c) = a.at(r, c);
          off += a.cols();
        }
      }
      break;
    }
    case OpKind::kVstack: {
      const int cols = in(0).cols();
      int rows = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) rows += in(k).rows();
      n.value = Tensor({rows, cols});
      int off = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const Tensor& a = in(k);
        for (int r = 0; r < a.rows(); ++r)
          for (int c = 0; c < cols; ++c) n.value.at(off + r, c) = a.at(r, c);
        off += a.rows();
      }
      break;
    }
    case OpKind::kSliceCols: {
      const Tensor& a = in(0);
      n.value = Tensor({a.rows(), n.i1});
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < n.i1; ++c) n.value.at(r, c) = a.at(r, n.i0 + c);
      break;
    }
    case OpKind::kSliceRows: {
      const Tensor& a = in(0);
      n.value = Tensor({n.i1, a.cols()});
      for (int r = 0; r < n.i1; ++r)
        for (int c = 0; c < a.cols(); ++c) n.value.at(r, c) = a.at(n.i0 + r, c);
      break;
    }
    case OpKind::kSumAll:
    case OpKind::kMeanAll: {
      const Tensor& a = in(0);
      double s = 0.0;
      for (std::size_t i = 0; i < a.numel(); ++i) s += a[i];
      if (n.kind == OpKind::kMeanAll) s /= static_cast<double>(a.numel());
      n.value = Tensor::scalar(s);
      break;
    }
    case OpKind::kRowSum: {
      const Tensor& a = in(0);
      n.value = Tensor({a.rows(), 1});
      for (int r = 0; r < a.rows(); ++r) {
        double s = 0.0;
        for (int c = 0; c < a.cols(); ++c) s += a.at(r, c);
        n.value.at(r, 0) = s;
      }
      break;
    }
    case OpKind::kRepeatRows: {
      const Tensor& a = in(0);
      n.value = Tensor({n.i0, a.cols()});
      for (int r = 0; r < n.i0; ++r)
        for (int c = 0; c < a.cols(); ++c) n.value.at(r, c) = a[c];
      break;
    }
    case OpKind::kRepeatCols: {
      const Tensor& a = in(0);
      n.value = Tensor({a.rows(), n.i0});
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < n.i0; ++c) n.value.at(r, c) = a.at(r, 0);
      break;
    }
    case OpKind::kAddRowvec: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      n.value = Tensor(a.shape());
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) n.value.at(r, c) = a.at(r, c) + b[c];
      break;
    }
    case OpKind::kMulRowvec: {
      const Tensor& a = in(0);
      const Tensor& s = in(1);
      n.value = Tensor(a.shape());
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) n.value.at(r, c) = a.at(r, c) * s[c];
      break;
    }
    case OpKind::kGatherRows: {
      const Tensor& a = in(0);
      const int rows = static_cast<int>(n.indices.size());
      n.value = Tensor({rows, a.cols()});
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < a.cols(); ++c)
          n.value.at(r, c) = a.at(n.indices[r], c);
      break;
    }
    case OpKind::kScatterSumRows: {
      const Tensor& a = in(0);
      n.value = Tensor({n.i0, a.cols()});
      for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c)
          n.value.at(n.indices[r], c) += a.at(r, c);
      break;
    }
  }
}

Tensor Tape::grad(Var v) const {
  const TapeNode& n = node(v);
  if (n.grad.numel() == 0 && n.value.numel() != 0) {
    return Tensor(n.value.shape());
  }
  return n.grad;
}

void Tape::recompute() {
  for (TapeNode& n : nodes_) {
    if (n.kind != OpKind::kLeaf) compute_forward(n);
  }
}

void Tape::backward(Var loss) {
  TapeNode& top = node(loss);
  if (top.value.numel() != 1) {
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                top.value.shape_str());
  }
  for (TapeNode& n : nodes_) n.grad = Tensor();

  auto ensure = [&](int id) -> Tensor& {
    TapeNode& n = nodes_[id];
    if (n.grad.numel() == 0) n.grad = Tensor(n.value.shape());
    return n.grad;
  };
  auto wants = [&](int id) { return nodes_[id].requires_grad; };

  {
    Tensor seed(top.value.shape());
    seed[0] = 1.0;
    top.grad = std::move(seed);
  }

  for (int id = loss.id; id >= 0; --id) {
    TapeNode& n = nodes_[id];
    if (n.grad.numel() == 0 || !n.requires_grad || n.kind == OpKind::kLeaf) {
      continue;
    }
    const Tensor& g = n.grad;
    switch (n.kind) {
      case OpKind::kLeaf:
        break;
      case OpKind::kMatmul: {
        const int ia = n.inputs[0], ib = n.inputs[1];
        const Tensor& a = nodes_[ia].value;
        const Tensor& b = nodes_[ib].value;
        ConstMap mg(g.data(), g.rows(), g.cols());
        if (wants(ia) && a.numel() > 0) {
          Tensor& da = ensure(ia);
          ConstMap mb(b.data(), b.rows(), b.cols());
          MutMap mda(da.data(), a.rows(), a.cols());
          if (b.cols() > 0) mda.noalias() += mg * mb.transpose();
        }
        if (wants(ib) && b.numel() > 0) {
          Tensor& db = ensure(ib);
          ConstMap ma(a.data(), a.rows(), a.cols());
          MutMap mdb(db.data(), b.rows(), b.cols());
          if (a.rows() > 0) mdb.noalias() += ma.transpose() * mg;
        }
        break;
      }
      case OpKind::kAdd:
      case OpKind::kSub: {
        const double sign = n.kind == OpKind::kSub ? -1.0 : 1.0;
        if (wants(n.inputs[0])) {
          Tensor& da = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) da[i] += g[i];
        }
        if (wants(n.inputs[1])) {
          Tensor& db = ensure(n.inputs[1]);
          for (std::size_t i = 0; i < g.numel(); ++i) db[i] += sign * g[i];
        }
        break;
      }
      case OpKind::kMul: {
        const Tensor& a = nodes_[n.inputs[0]].value;
        const Tensor& b = nodes_[n.inputs[1]].value;
        if (wants(n.inputs[0])) {
          Tensor& da = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) da[i] += g[i] * b[i];
        }
        if (wants(n.inputs[1])) {
          Tensor& db = ensure(n.inputs[1]);
          for (std::size_t i = 0; i < g.numel(); ++i) db[i] += g[i] * a[i];
        }
        break;
      }
      case OpKind::kDiv: {
        const Tensor& a = nodes_[n.inputs[0]].value;
        const Tensor& b = nodes_[n.inputs[1]].value;
        if (wants(n.inputs[0])) {
          Tensor& da = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) da[i] += g[i] / b[i];
        }
        if (wants(n.inputs[1])) {
          Tensor& db = ensure(n.inputs[1]);
          for (std::size_t i = 0; i < g.numel(); ++i)
            db[i] -= g[i] * a[i] / (b[i] * b[i]);
        }
        break;
      }
      case OpKind::kRelu: {
        const Tensor& x = nodes_[n.inputs[0]].value;
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          // Subgradient 0 at exactly 0.
          for (std::size_t i = 0; i < g.numel(); ++i)
            if (x[i] > 0.0) dx[i] += g[i];
        }
        break;
      }
      case OpKind::kSigmoid: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          const Tensor& y = n.value;
          for (std::size_t i = 0; i < g.numel(); ++i)
            dx[i] += g[i] * y[i] * (1.0 - y[i]);
        }
        break;
      }
      case OpKind::kTanh: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          const Tensor& y = n.value;
          for (std::size_t i = 0; i < g.numel(); ++i)
            dx[i] += g[i] * (1.0 - y[i] * y[i]);
        }
        break;
      }
      case OpKind::kSqrt: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          const Tensor& y = n.value;
          for (std::size_t i = 0; i < g.numel(); ++i)
            if (y[i] > 0.0) dx[i] += g[i] * 0.5 / y[i];
        }
        break;
      }
      case OpKind::kSquare: {
        const Tensor& x = nodes_[n.inputs[0]].value;
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i)
            dx[i] += g[i] * 2.0 * x[i];
        }
        break;
      }
      case OpKind::kAbs: {
        const Tensor& x = nodes_[n.inputs[0]].value;
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) {
            if (x[i] > 0.0) dx[i] += g[i];
            else if (x[i] < 0.0) dx[i] -= g[i];
          }
        }
        break;
      }
      case OpKind::kAcos: {
        const Tensor& x = nodes_[n.inputs[0]].value;
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) {
            const double xc = clamp_unit(x[i]);
            dx[i] -= g[i] / std::sqrt(1.0 - xc * xc);
          }
        }
        break;
      }
      case OpKind::kScalarMul: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) dx[i] += n.scalar * g[i];
        }
        break;
      }
      case OpKind::kConcatCols: {
        const bool rank1 = nodes_[n.inputs[0]].value.rank() == 1;
        int off = 0;
        for (int inid : n.inputs) {
          const Tensor& a = nodes_[inid].value;
          if (wants(inid)) {
            Tensor& da = ensure(inid);
            if (rank1) {
              for (int c = 0; c < a.cols(); ++c) da[c] += g[off + c];
            } else {
              for (int r = 0; r < a.rows(); ++r)
                for (int c = 0; c < a.cols(); ++c)
                  da.at(r, c) += g.at(r, off + c);
            }
          }
          off += a.cols();
        }
        break;
      }
      case OpKind::kVstack: {
        int off = 0;
        for (int inid : n.inputs) {
          const Tensor& a = nodes_[inid].value;
          if (wants(inid)) {
            Tensor& da = ensure(inid);
            for (int r = 0; r < a.rows(); ++r)
              for (int c = 0; c < a.cols(); ++c)
                da.at(r, c) += g.at(off + r, c);
          }
          off += a.rows();
        }
        break;
      }
      case OpKind::kSliceCols: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) dx.at(r, n.i0 + c) += g.at(r, c);
        }
        break;
      }
      case OpKind::kSliceRows: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) dx.at(n.i0 + r, c) += g.at(r, c);
        }
        break;
      }
      case OpKind::kSumAll: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < dx.numel(); ++i) dx[i] += g[0];
        }
        break;
      }
      case OpKind::kMeanAll: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          const double s = g[0] / static_cast<double>(dx.numel());
          for (std::size_t i = 0; i < dx.numel(); ++i) dx[i] += s;
        }
        break;
      }
      case OpKind::kRowSum: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < dx.rows(); ++r)
            for (int c = 0; c < dx.cols(); ++c) dx.at(r, c) += g.at(r, 0);
        }
        break;
      }
      case OpKind::kRepeatRows: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) dx[c] += g.at(r, c);
        }
        break;
      }
      case OpKind::kRepeatCols: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) dx.at(r, 0) += g.at(r, c);
        }
        break;
      }
      case OpKind::kAddRowvec: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (std::size_t i = 0; i < g.numel(); ++i) dx[i] += g[i];
        }
        if (wants(n.inputs[1])) {
          Tensor& db = ensure(n.inputs[1]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) db[c] += g.at(r, c);
        }
        break;
      }
      case OpKind::kMulRowvec: {
        const Tensor& x = nodes_[n.inputs[0]].value;
        const Tensor& s = nodes_[n.inputs[1]].value;
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) dx.at(r, c) += g.at(r, c) * s[c];
        }
        if (wants(n.inputs[1])) {
          Tensor& ds = ensure(n.inputs[1]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) ds[c] += g.at(r, c) * x.at(r, c);
        }
        break;
      }
      case OpKind::kGatherRows: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c)
              dx.at(n.indices[r], c) += g.at(r, c);
        }
        break;
      }
      case OpKind::kScatterSumRows: {
        if (wants(n.inputs[0])) {
          Tensor& dx = ensure(n.inputs[0]);
          for (int r = 0; r < dx.rows(); ++r)
            for (int c = 0; c < dx.cols(); ++c)
              dx.at(r, c) += g.at(n.indices[r], c);
        }
        break;
      }
    }
  }
}

}  // namespace gnphys
