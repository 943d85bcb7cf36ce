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

#ifndef GNPHYS_NN_H_
#define GNPHYS_NN_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gnphys/rng.hpp"
#include "gnphys/tape.hpp"
#include "gnphys/tensor.hpp"

namespace gnphys {

// Named views into a model's parameter tensors. The order is the
// registration order, which models keep deterministic.
using ParamSet = std::vector<std::pair<std::string, Tensor*>>;

// Multi-layer perceptron: affine layers with ReLU on all hidden layers and a
// linear output layer.
struct MlpParams {
  std::vector<Tensor> weights;  // layer l: [in_l x out_l]
  std::vector<Tensor> biases;   // layer l: [1 x out_l]

  int in_width() const { return weights.empty() ? 0 : weights.front().rows(); }
  int out_width() const { return weights.empty() ? 0 : weights.back().cols(); }
  void collect(const std::string& prefix, ParamSet& out);
};

// Gated recurrent unit cell (update gate z, reset gate r, candidate h~):
//   z = sigmoid(x Wz + h Uz + bz)
//   r = sigmoid(x Wr + h Ur + br)
//   h~ = tanh(x Wh + (r*h) Uh + bh)
//   h' = (1-z)*h + z*h~
struct GruParams {
  Tensor wz, uz, bz;
  Tensor wr, ur, br;
  Tensor wh, uh, bh;

  int in_width() const { return wz.rows(); }
  int hidden_width() const { return wz.cols(); }
  void collect(const std::string& prefix, ParamSet& out);
};

// Uniform Glorot initialization in +-sqrt(6/(fan_in+fan_out)); biases zero.
Tensor glorot_uniform(int fan_in, int fan_out, Rng& rng);

MlpParams make_mlp(int in_width, const std::vector<int>& hidden, int out_width,
                   Rng& rng);
GruParams make_gru(int in_width, int hidden_width, Rng& rng);

// Registers parameter leaves on a tape exactly once per tensor and remembers
// their names, so gradients can be pulled out by name after backward().
class Binder {
 public:
  explicit Binder(Tape& tape) : tape_(&tape) {}

  Var operator()(const std::string& name, const Tensor& value);

  // Gradients for every bound parameter (zeros if off-path).
  std::map<std::string, Tensor> grads() const;

  Tape& tape() { return *tape_; }

 private:
  Tape* tape_;
  std::vector<std::pair<std::string, Var>> bound_;
};

struct MlpVars {
  std::vector<Var> weights;
  std::vector<Var> biases;
};

struct GruVars {
  Var wz, uz, bz;
  Var wr, ur, br;
  Var wh, uh, bh;
};

MlpVars bind_mlp(Binder& b, const std::string& prefix, const MlpParams& p);
GruVars bind_gru(Binder& b, const std::string& prefix, const GruParams& p);

// x: [N x in] -> [N x out].
Var mlp_apply(Tape& t, const MlpVars& p, Var x);
// x: [N x in], h: [N x hidden] -> new hidden [N x hidden].
Var gru_step(Tape& t, const GruVars& p, Var x, Var h);

// Convenience wrappers evaluating on a scratch tape (no gradients kept).
Tensor mlp_eval(const MlpParams& p, const Tensor& x);
Tensor gru_eval(const GruParams& p, const Tensor& x, const Tensor& h);

}  // namespace gnphys

#endif  // GNPHYS_NN_H_
