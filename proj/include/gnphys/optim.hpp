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

#ifndef GNPHYS_OPTIM_H_
#define GNPHYS_OPTIM_H_

#include <map>
#include <string>

#include "gnphys/nn.hpp"
#include "gnphys/tensor.hpp"

namespace gnphys {

using GradMap = std::map<std::string, Tensor>;

// Adam with bias correction. Moment tensors are keyed by parameter name and
// created on first use.
struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;
  std::map<std::string, Tensor> m;
  std::map<std::string, Tensor> v;
};

// In-place bias-corrected Adam update. Rejects non-finite gradients,
// reporting the offending parameter name.
void adam_step(AdamState& state, const ParamSet& params, const GradMap& grads);

// Scales all gradients by max_norm/norm when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm. Idempotent.
double clip_global_norm(GradMap& grads, double max_norm);

}  // namespace gnphys

#endif  // GNPHYS_OPTIM_H_
