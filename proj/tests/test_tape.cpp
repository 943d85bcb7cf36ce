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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "gnphys/tape.hpp"
#include "gnphys/tensor.hpp"
#include "test_util.hpp"

using namespace gnphys;
using gnphys::testing::max_grad_rel_err;
using gnphys::testing::random_tensor;

TEST_CASE("relu forward matches definition") {
  Tape t;
  Var x = t.constant(Tensor::vec({-1.0, 0.0, 2.0}));
  const Tensor& y = t.value(t.relu(x));
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 0.0);
  CHECK(y[2] == 2.0);
}

TEST_CASE("matmul identity") {
  Tape t;
  Var i2 = t.constant(Tensor::identity(2));
  Var v = t.constant(Tensor({2, 1}, {3.0, 4.0}));
  const Tensor& y = t.value(t.matmul(i2, v));
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 4.0);
}

TEST_CASE("concat last axis on vectors") {
  Tape t;
  Var a = t.constant(Tensor::vec({1.0, 2.0}));
  Var b = t.constant(Tensor::vec({3.0}));
  const Tensor& y = t.value(t.concat_cols({a, b}));
  CHECK(y.rank() == 1);
  REQUIRE(y.numel() == 3);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 2.0);
  CHECK(y[2] == 3.0);
}

TEST_CASE("shape mismatch reports both shapes") {
  Tape t;
  Var a = t.constant(Tensor::zeros(2, 3));
  Var b = t.constant(Tensor::zeros(2, 2));
  try {
    t.matmul(a, b);
    FAIL("expected exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2, 3]") != std::string::npos);
    CHECK(msg.find("[2, 2]") != std::string::npos);
  }
}

TEST_CASE("d(x^2)/dx at 3 is 6") {
  Tape t;
  Var x = t.leaf(Tensor::scalar(3.0));
  Var loss = t.sum_all(t.square(x));
  t.backward(loss);
  CHECK(t.grad(x)[0] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("d(sum(relu(x)))/dx uses subgradient 0 below zero") {
  Tape t;
  Var x = t.leaf(Tensor::vec({-1.0, 2.0}));
  t.backward(t.sum_all(t.relu(x)));
  Tensor g = t.grad(x);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 1.0);
}

TEST_CASE("leaves off the loss path get zero gradients") {
  Tape t;
  Var x = t.leaf(Tensor::scalar(2.0));
  Var y = t.leaf(Tensor::scalar(5.0));
  t.backward(t.sum_all(t.square(x)));
  CHECK(t.grad(y)[0] == 0.0);
}

TEST_CASE("non-scalar loss is rejected") {
  Tape t;
  Var x = t.leaf(Tensor::vec({1.0, 2.0}));
  CHECK_THROWS_AS(t.backward(x), std::invalid_argument);
}

TEST_CASE("tape replay is bit-identical") {
  Rng rng(7);
  Tape t;
  Var a = t.leaf(random_tensor(3, 4, rng));
  Var b = t.leaf(random_tensor(4, 2, rng));
  Var y = t.sigmoid(t.matmul(t.relu(a), b));
  std::vector<double> before = t.value(y).vec_data();
  t.recompute();
  CHECK(t.value(y).vec_data() == before);
}

TEST_CASE("every differentiable op passes a finite-difference check") {
  Rng rng(42);

  // Builds the loss for a given op tag from a flat parameter vector; the
  // same builder serves the analytic pass and the FD re-evaluations.
  auto run_check = [&](const std::string& op, int r, int c) {
    Tensor x0 = random_tensor(r, c, rng, 0.2, 1.5);  // positive: sqrt/div-safe
    Tensor other = random_tensor(r, c, rng, 0.3, 1.2);
    Tensor m2 = random_tensor(c, r, rng);
    Tensor rowvec = random_tensor(1, c, rng, 0.3, 1.2);

    auto build = [&](const std::vector<double>& flat, Tape& t, Var& xout) {
      Tensor xt({r, c}, flat);
      Var x = t.leaf(std::move(xt));
      xout = x;
      Var o = t.constant(other);
      Var y;
      if (op == "matmul") y = t.matmul(x, t.constant(m2));
      else if (op == "add") y = t.add(x, o);
      else if (op == "sub") y = t.sub(x, o);
      else if (op == "mul") y = t.mul(x, o);
      else if (op == "div") y = t.div(x, o);
      else if (op == "relu") y = t.relu(x);
      else if (op == "sigmoid") y = t.sigmoid(x);
      else if (op == "tanh") y = t.tanh_(x);
      else if (op == "sqrt") y = t.sqrt_(x);
      else if (op == "square") y = t.square(x);
      else if (op == "abs") y = t.abs_(x);
      else if (op == "acos") y = t.scalar_mul(t.acos_(t.scalar_mul(x, 0.5)), 1.0);
      else if (op == "scalar_mul") y = t.scalar_mul(x, -2.5);
      else if (op == "concat") y = t.concat_cols({x, o});
      else if (op == "vstack") y = t.vstack({x, o});
      else if (op == "slice_cols") y = t.slice_cols(x, 1, c - 1);
      else if (op == "slice_rows") y = t.slice_rows(x, 1, r - 1);
      else if (op == "mean") y = t.mean_all(x);
      else if (op == "row_sum") y = t.row_sum(x);
      else if (op == "repeat_cols") y = t.repeat_cols(t.row_sum(x), 3);
      else if (op == "repeat_rows") y = t.repeat_rows(t.slice_rows(x, 0, 1), 4);
      else if (op == "add_rowvec") y = t.add_rowvec(x, t.constant(rowvec));
      else if (op == "mul_rowvec") y = t.mul_rowvec(x, t.constant(rowvec));
      else if (op == "gather") y = t.gather_rows(x, {1, 0, 2, 1});
      else if (op == "scatter") y = t.scatter_sum_rows(x, {1, 0, 1}, 2);
      else throw std::logic_error("unknown op " + op);
      // Weighted sum keeps the gradient informative for matrix-valued ops.
      const Tensor& yv = t.value(y);
      Tensor wfit(yv.shape());
      Rng wr(99);
      for (std::size_t i = 0; i < wfit.numel(); ++i) wfit[i] = wr.uniform(-1.0, 1.0);
      return t.sum_all(t.mul(y, t.constant(std::move(wfit))));
    };

    auto f = [&](const std::vector<double>& flat) {
      Tape t;
      Var x;
      Var loss = build(flat, t, x);
      return t.value(loss)[0];
    };

    Tape t;
    Var x;
    Var loss = build(x0.vec_data(), t, x);
    t.backward(loss);
    const double err =
        max_grad_rel_err(f, x0.vec_data(), t.grad(x).vec_data());
    INFO("op=", op);
    CHECK(err < 1e-5);
  };

  for (const char* op :
       {"matmul", "add", "sub", "mul", "div", "relu", "sigmoid", "tanh",
        "sqrt", "square", "abs", "acos", "scalar_mul", "concat", "vstack",
        "slice_cols", "slice_rows", "mean", "row_sum", "repeat_cols",
        "repeat_rows", "add_rowvec", "mul_rowvec", "gather", "scatter"}) {
    run_check(op, 3, 4);
  }
}

TEST_CASE("scatter_sum aggregates in index order and handles empty targets") {
  Tape t;
  Var x = t.constant(Tensor({3, 2}, {1, 2, 3, 4, 5, 6}));
  Var y = t.scatter_sum_rows(x, {2, 0, 2}, 4);
  const Tensor& v = t.value(y);
  CHECK(v.at(0, 0) == 3.0);
  CHECK(v.at(1, 0) == 0.0);  // no contributions: exact zero row
  CHECK(v.at(1, 1) == 0.0);
  CHECK(v.at(2, 0) == 6.0);
  CHECK(v.at(2, 1) == 8.0);
  CHECK(v.at(3, 0) == 0.0);
}

TEST_CASE("zero-width tensors flow through matmul and concat") {
  Tape t;
  Var empty = t.constant(Tensor::zeros(3, 0));
  Var w = t.constant(Tensor::zeros(0, 4));
  const Tensor& y = t.value(t.matmul(empty, w));
  CHECK(y.rows() == 3);
  CHECK(y.cols() == 4);
  for (std::size_t i = 0; i < y.numel(); ++i) CHECK(y[i] == 0.0);

  Var full = t.constant(Tensor({3, 2}, {1, 2, 3, 4, 5, 6}));
  const Tensor& cat = t.value(t.concat_cols({empty, full}));
  CHECK(cat.cols() == 2);
  CHECK(cat.at(2, 1) == 6.0);
}

TEST_CASE("forward evaluation is deterministic") {
  auto run = [] {
    Rng rng(3);
    Tape t;
    Var a = t.leaf(random_tensor(4, 4, rng));
    Var b = t.leaf(random_tensor(4, 4, rng));
    return t.value(t.tanh_(t.matmul(a, b))).vec_data();
  };
  CHECK(run() == run());
}
