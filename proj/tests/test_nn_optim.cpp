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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gnphys/archive.hpp"
#include "gnphys/nn.hpp"
#include "gnphys/optim.hpp"
#include "test_util.hpp"

using namespace gnphys;
using gnphys::testing::max_grad_rel_err;
using gnphys::testing::naive_matmul;
using gnphys::testing::random_tensor;

namespace {

// Scalar-loop MLP oracle: explicit affine + ReLU chain, no Tape, no Eigen.
Tensor mlp_oracle(const MlpParams& p, const Tensor& x) {
  Tensor h = x;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    Tensor z = naive_matmul(h, p.weights[l]);
    for (int r = 0; r < z.rows(); ++r)
      for (int c = 0; c < z.cols(); ++c) z.at(r, c) += p.biases[l][c];
    if (l + 1 < p.weights.size()) {
      for (std::size_t i = 0; i < z.numel(); ++i) z[i] = z[i] > 0 ? z[i] : 0.0;
    }
    h = z;
  }
  return h;
}

double sigm(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Scalar-loop GRU oracle.
Tensor gru_oracle(const GruParams& p, const Tensor& x, const Tensor& h) {
  const int n = x.rows();
  const int hw = p.hidden_width();
  Tensor out({n, hw});
  std::vector<double> z(hw), rg(hw);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < hw; ++j) {
      double az = p.bz[j], ar = p.br[j];
      for (int k = 0; k < x.cols(); ++k) {
        az += x.at(r, k) * p.wz.at(k, j);
        ar += x.at(r, k) * p.wr.at(k, j);
      }
      for (int k = 0; k < hw; ++k) {
        az += h.at(r, k) * p.uz.at(k, j);
        ar += h.at(r, k) * p.ur.at(k, j);
      }
      z[j] = sigm(az);
      rg[j] = sigm(ar);
    }
    for (int j = 0; j < hw; ++j) {
      double ah = p.bh[j];
      for (int k = 0; k < x.cols(); ++k) ah += x.at(r, k) * p.wh.at(k, j);
      for (int k = 0; k < hw; ++k) ah += rg[k] * h.at(r, k) * p.uh.at(k, j);
      const double cand = std::tanh(ah);
      out.at(r, j) = (1.0 - z[j]) * h.at(r, j) + z[j] * cand;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("mlp with zero weights returns bias") {
  Rng rng(1);
  MlpParams p = make_mlp(3, {4}, 2, rng);
  for (auto& w : p.weights)
    for (std::size_t i = 0; i < w.numel(); ++i) w[i] = 0.0;
  p.biases[1] = Tensor({1, 2}, {0.5, -0.25});
  Tensor y = mlp_eval(p, random_tensor(5, 3, rng));
  for (int r = 0; r < 5; ++r) {
    CHECK(y.at(r, 0) == 0.5);
    CHECK(y.at(r, 1) == -0.25);
  }
}

TEST_CASE("single identity layer is the identity") {
  MlpParams p;
  p.weights.push_back(Tensor::identity(3));
  p.biases.push_back(Tensor({1, 3}));
  Rng rng(2);
  Tensor x = random_tensor(4, 3, rng);
  Tensor y = mlp_eval(p, x);
  CHECK(y.vec_data() == x.vec_data());
}

TEST_CASE("mlp matches the naive oracle to 1e-12") {
  Rng rng(3);
  MlpParams p = make_mlp(5, {7, 6}, 4, rng);
  for (auto& b : p.biases)
    for (std::size_t i = 0; i < b.numel(); ++i) b[i] = rng.uniform(-0.5, 0.5);
  Tensor x = random_tensor(9, 5, rng);
  Tensor got = mlp_eval(p, x);
  Tensor want = mlp_oracle(p, x);
  REQUIRE(got.numel() == want.numel());
  for (std::size_t i = 0; i < got.numel(); ++i)
    CHECK(std::abs(got[i] - want[i]) < 1e-12);
}

TEST_CASE("mlp gradient passes finite differences") {
  Rng rng(4);
  MlpParams p = make_mlp(4, {8, 8}, 3, rng);
  Tensor x = random_tensor(2, 4, rng);

  ParamSet ps;
  p.collect("mlp", ps);
  std::vector<double> flat;
  for (auto& [n, t] : ps) {
    (void)n;
    flat.insert(flat.end(), t->vec_data().begin(), t->vec_data().end());
  }

  auto unflatten = [&](const std::vector<double>& f) {
    std::size_t off = 0;
    MlpParams q = p;
    ParamSet qs;
    q.collect("mlp", qs);
    for (auto& [n, t] : qs) {
      (void)n;
      for (std::size_t i = 0; i < t->numel(); ++i) (*t)[i] = f[off++];
    }
    return q;
  };
  auto f = [&](const std::vector<double>& fl) {
    MlpParams q = unflatten(fl);
    Tape t;
    Binder b(t);
    MlpVars v = bind_mlp(b, "mlp", q);
    return t.value(t.mean_all(t.square(mlp_apply(t, v, t.constant(x)))))[0];
  };

  Tape t;
  Binder b(t);
  MlpVars v = bind_mlp(b, "mlp", p);
  t.backward(t.mean_all(t.square(mlp_apply(t, v, t.constant(x)))));
  GradMap grads = b.grads();
  std::vector<double> analytic;
  for (auto& [n, _] : ps) {
    (void)_;
    const Tensor& g = grads.at(n);
    analytic.insert(analytic.end(), g.vec_data().begin(), g.vec_data().end());
  }
  CHECK(max_grad_rel_err(f, flat, analytic) < 1e-5);
}

TEST_CASE("gru with zero parameters and zero hidden stays zero") {
  GruParams p;
  p.wz = Tensor::zeros(3, 4); p.uz = Tensor::zeros(4, 4); p.bz = Tensor::zeros(1, 4);
  p.wr = Tensor::zeros(3, 4); p.ur = Tensor::zeros(4, 4); p.br = Tensor::zeros(1, 4);
  p.wh = Tensor::zeros(3, 4); p.uh = Tensor::zeros(4, 4); p.bh = Tensor::zeros(1, 4);
  Rng rng(5);
  Tensor y = gru_eval(p, random_tensor(2, 3, rng), Tensor::zeros(2, 4));
  for (std::size_t i = 0; i < y.numel(); ++i) CHECK(y[i] == 0.0);
}

TEST_CASE("large negative update-gate bias freezes the hidden state") {
  Rng rng(6);
  GruParams p = make_gru(3, 4, rng);
  for (std::size_t i = 0; i < p.bz.numel(); ++i) p.bz[i] = -40.0;
  for (std::size_t i = 0; i < p.wz.numel(); ++i) p.wz[i] = 0.0;
  for (std::size_t i = 0; i < p.uz.numel(); ++i) p.uz[i] = 0.0;
  Tensor h = random_tensor(2, 4, rng);
  Tensor y = gru_eval(p, random_tensor(2, 3, rng), h);
  for (std::size_t i = 0; i < y.numel(); ++i)
    CHECK(std::abs(y[i] - h[i]) < 1e-6);
}

TEST_CASE("gru matches the scalar-loop oracle to 1e-12") {
  Rng rng(7);
  GruParams p = make_gru(3, 5, rng);
  for (Tensor* b : {&p.bz, &p.br, &p.bh})
    for (std::size_t i = 0; i < b->numel(); ++i) (*b)[i] = rng.uniform(-0.3, 0.3);
  Tensor x = random_tensor(4, 3, rng);
  Tensor h = random_tensor(4, 5, rng);
  Tensor got = gru_eval(p, x, h);
  Tensor want = gru_oracle(p, x, h);
  for (std::size_t i = 0; i < got.numel(); ++i)
    CHECK(std::abs(got[i] - want[i]) < 1e-12);
}

TEST_CASE("adam first step with unit gradient moves by about -lr") {
  Tensor theta = Tensor::scalar(1.0);
  ParamSet ps{{"w", &theta}};
  AdamState st;
  st.lr = 0.1;
  GradMap g{{"w", Tensor::scalar(1.0)}};
  adam_step(st, ps, g);
  CHECK(std::abs((theta[0] - 1.0) + 0.1) < 1e-8);
  CHECK(st.t == 1);
}

TEST_CASE("zero gradients leave parameters unchanged") {
  Tensor theta = Tensor::vec({1.0, -2.0});
  ParamSet ps{{"w", &theta}};
  AdamState st;
  GradMap g{{"w", Tensor({2})}};
  adam_step(st, ps, g);
  CHECK(theta[0] == 1.0);
  CHECK(theta[1] == -2.0);
}

TEST_CASE("constant gradient gives non-increasing step sizes") {
  Tensor theta = Tensor::scalar(0.0);
  ParamSet ps{{"w", &theta}};
  AdamState st;
  st.lr = 0.01;
  double prev = theta[0];
  double last_step = 1e9;
  for (int i = 0; i < 5; ++i) {
    GradMap g{{"w", Tensor::scalar(2.0)}};
    adam_step(st, ps, g);
    const double step = std::abs(theta[0] - prev);
    CHECK(step <= last_step + 1e-15);
    last_step = step;
    prev = theta[0];
  }
}

TEST_CASE("non-finite gradient is rejected with the parameter name") {
  Tensor theta = Tensor::scalar(0.0);
  ParamSet ps{{"core/w3", &theta}};
  AdamState st;
  GradMap g{{"core/w3", Tensor::scalar(std::nan(""))}};
  try {
    adam_step(st, ps, g);
    FAIL("expected exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("core/w3") != std::string::npos);
  }
}

TEST_CASE("global norm clipping") {
  GradMap g;
  g["a"] = Tensor::vec({6.0, 8.0});  // norm 10
  double norm = clip_global_norm(g, 5.0);
  CHECK(norm == doctest::Approx(10.0));
  CHECK(g["a"][0] == doctest::Approx(3.0));
  CHECK(g["a"][1] == doctest::Approx(4.0));

  GradMap h;
  h["a"] = Tensor::vec({3.0});
  clip_global_norm(h, 5.0);
  CHECK(h["a"][0] == 3.0);
}

TEST_CASE("clipping bounds the norm and is idempotent") {
  Rng rng(8);
  GradMap g;
  g["a"] = random_tensor(3, 3, rng, -5.0, 5.0);
  g["b"] = random_tensor(2, 4, rng, -5.0, 5.0);
  clip_global_norm(g, 1.0);
  double sq = 0.0;
  for (auto& [n, t] : g) {
    (void)n;
    for (std::size_t i = 0; i < t.numel(); ++i) sq += t[i] * t[i];
  }
  CHECK(std::sqrt(sq) <= 1.0 + 1e-12);
  GradMap g2 = g;
  clip_global_norm(g2, 1.0);
  for (auto& [n, t] : g2) CHECK(t.vec_data() == g[n].vec_data());
}

TEST_CASE("archive round-trips tensors bit-exactly") {
  Rng rng(9);
  Archive a;
  a.meta["kind"] = "test";
  a.tensors["x/w"] = random_tensor(3, 5, rng, -10.0, 10.0);
  a.tensors["y"] = Tensor::scalar(0.1 + 0.2);  // not exactly 0.3
  const std::string path = (std::filesystem::temp_directory_path() /
                            "gnphys_archive_test.bin").string();
  a.save(path);
  Archive b = Archive::load(path);
  CHECK(b.meta["kind"] == "test");
  CHECK(b.tensors.at("x/w").vec_data() == a.tensors.at("x/w").vec_data());
  CHECK(b.tensors.at("y")[0] == a.tensors.at("y")[0]);
  std::filesystem::remove(path);
}
