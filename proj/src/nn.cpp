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

#include "gnphys/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace gnphys {

void MlpParams::collect(const std::string& prefix, ParamSet& out) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.emplace_back(prefix + "/w" + std::to_string(l), &weights[l]);
    out.emplace_back(prefix + "/b" + std::to_string(l), &biases[l]);
  }
}

void GruParams::collect(const std::string& prefix, ParamSet& out) {
  out.emplace_back(prefix + "/wz", &wz);
  out.emplace_back(prefix + "/uz", &uz);
  out.emplace_back(prefix + "/bz", &bz);
  out.emplace_back(prefix + "/wr", &wr);
  out.emplace_back(prefix + "/ur", &ur);
  out.emplace_back(prefix + "/br", &br);
  out.emplace_back(prefix + "/wh", &wh);
  out.emplace_back(prefix + "/uh", &uh);
  out.emplace_back(prefix + "/bh", &bh);
}

Tensor glorot_uniform(int fan_in, int fan_out, Rng& rng) {
  Tensor w({fan_in, fan_out});
  const double limit = std::sqrt(6.0 / std::max(1, fan_in + fan_out));
  for (std::size_t i = 0; i < w.numel(); ++i) w[i] = rng.uniform(-limit, limit);
  return w;
}

MlpParams make_mlp(int in_width, const std::vector<int>& hidden, int out_width,
                   Rng& rng) {
  MlpParams p;
  int prev = in_width;
  for (int h : hidden) {
    p.weights.push_back(glorot_uniform(prev, h, rng));
    p.biases.push_back(Tensor({1, h}));
    prev = h;
  }
  p.weights.push_back(glorot_uniform(prev, out_width, rng));
  p.biases.push_back(Tensor({1, out_width}));
  return p;
}

GruParams make_gru(int in_width, int hidden_width, Rng& rng) {
  GruParams p;
  p.wz = glorot_uniform(in_width, hidden_width, rng);
  p.uz = glorot_uniform(hidden_width, hidden_width, rng);
  p.bz = Tensor({1, hidden_width});
  p.wr = glorot_uniform(in_width, hidden_width, rng);
  p.ur = glorot_uniform(hidden_width, hidden_width, rng);
  p.br = Tensor({1, hidden_width});
  p.wh = glorot_uniform(in_width, hidden_width, rng);
  p.uh = glorot_uniform(hidden_width, hidden_width, rng);
  p.bh = Tensor({1, hidden_width});
  return p;
}

Var Binder::operator()(const std::string& name, const Tensor& value) {
  Var v = tape_->leaf(value, /*requires_grad=*/true);
  bound_.emplace_back(name, v);
  return v;
}

std::map<std::string, Tensor> Binder::grads() const {
  std::map<std::string, Tensor> out;
  for (const auto& [name, var] : bound_) out[name] = tape_->grad(var);
  return out;
}

MlpVars bind_mlp(Binder& b, const std::string& prefix, const MlpParams& p) {
  MlpVars v;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    v.weights.push_back(b(prefix + "/w" + std::to_string(l), p.weights[l]));
    v.biases.push_back(b(prefix + "/b" + std::to_string(l), p.biases[l]));
  }
  return v;
}

GruVars bind_gru(Binder& b, const std::string& prefix, const GruParams& p) {
  GruVars v;
  v.wz = b(prefix + "/wz", p.wz);
  v.uz = b(prefix + "/uz", p.uz);
  v.bz = b(prefix + "/bz", p.bz);
  v.wr = b(prefix + "/wr", p.wr);
  v.ur = b(prefix + "/ur", p.ur);
  v.br = b(prefix + "/br", p.br);
  v.wh = b(prefix + "/wh", p.wh);
  v.uh = b(prefix + "/uh", p.uh);
  v.bh = b(prefix + "/bh", p.bh);
  return v;
}

Var mlp_apply(Tape& t, const MlpVars& p, Var x) {
  if (p.weights.empty()) throw std::invalid_argument("mlp_apply: empty MLP");
  Var h = x;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    h = t.add_rowvec(t.matmul(h, p.weights[l]), p.biases[l]);
    if (l + 1 < p.weights.size()) h = t.relu(h);
  }
  return h;
}

Var gru_step(Tape& t, const GruVars& p, Var x, Var h) {
  Var z = t.sigmoid(t.add_rowvec(t.add(t.matmul(x, p.wz), t.matmul(h, p.uz)), p.bz));
  Var r = t.sigmoid(t.add_rowvec(t.add(t.matmul(x, p.wr), t.matmul(h, p.ur)), p.br));
  Var cand = t.tanh_(
      t.add_rowvec(t.add(t.matmul(x, p.wh), t.matmul(t.mul(r, h), p.uh)), p.bh));
  // h' = (1-z)*h + z*cand, written as h + z*(cand - h).
  return t.add(h, t.mul(z, t.sub(cand, h)));
}

Tensor mlp_eval(const MlpParams& p, const Tensor& x) {
  Tape t;
  Binder b(t);
  MlpVars v = bind_mlp(b, "m", p);
  return t.value(mlp_apply(t, v, t.constant(x)));
}

Tensor gru_eval(const GruParams& p, const Tensor& x, const Tensor& h) {
  Tape t;
  Binder b(t);
  GruVars v = bind_gru(b, "g", p);
  return t.value(gru_step(t, v, t.constant(x), t.constant(h)));
}

}  // namespace gnphys
