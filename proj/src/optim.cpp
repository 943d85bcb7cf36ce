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

#include "gnphys/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace gnphys {

void adam_step(AdamState& state, const ParamSet& params, const GradMap& grads) {
  for (const auto& [name, _] : grads) {
    (void)_;
    bool known = false;
    for (const auto& [pname, __] : params) {
      (void)__;
      if (pname == name) { known = true; break; }
    }
    if (!known) throw std::invalid_argument("adam_step: unknown gradient " + name);
  }

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

  for (const auto& [name, param] : params) {
    auto it = grads.find(name);
    if (it == grads.end()) {
      throw std::invalid_argument("adam_step: missing gradient for " + name);
    }
    const Tensor& g = it->second;
    if (!g.same_shape(*param)) {
      throw std::invalid_argument("adam_step: gradient shape " + g.shape_str() +
                                  " does not match parameter " + name + " " +
                                  param->shape_str());
    }
    for (std::size_t i = 0; i < g.numel(); ++i) {
      if (!std::isfinite(g[i])) {
        throw std::runtime_error("adam_step: non-finite gradient in " + name);
      }
    }
    Tensor& m = state.m.try_emplace(name, Tensor(param->shape())).first->second;
    Tensor& v = state.v.try_emplace(name, Tensor(param->shape())).first->second;
    for (std::size_t i = 0; i < g.numel(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      (*param)[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

double clip_global_norm(GradMap& grads, double max_norm) {
  if (max_norm <= 0.0) {
    throw std::invalid_argument("clip_global_norm: max_norm must be positive");
  }
  double sq = 0.0;
  for (const auto& [name, g] : grads) {
    (void)name;
    for (std::size_t i = 0; i < g.numel(); ++i) sq += g[i] * g[i];
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& [name, g] : grads) {
      (void)name;
      for (std::size_t i = 0; i < g.numel(); ++i) g[i] *= scale;
    }
  }
  return norm;
}

}  // namespace gnphys
