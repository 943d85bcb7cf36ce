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

// Test-only oracles shared across suites. These deliberately avoid the
// library's fast paths: naive loops, no Eigen, no tape.

#ifndef GNPHYS_TESTS_TEST_UTIL_H_
#define GNPHYS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gnphys/rng.hpp"
#include "gnphys/tensor.hpp"

namespace gnphys::testing {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

// Central finite differences of a scalar function against an analytic
// gradient. Returns the worst relative error across coordinates.
inline double max_grad_rel_err(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, const std::vector<double>& analytic,
    double h = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, rel_err(analytic[i], fd));
  }
  return worst;
}

// Plain two-loop matrix product, the oracle for matmul-based layers.
inline Tensor naive_matmul(const Tensor& a, const Tensor& b) {
  Tensor c({a.rows(), b.cols()});
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (int k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
      c.at(i, j) = s;
    }
  return c;
}

inline Tensor random_tensor(int r, int c, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  Tensor t({r, c});
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

}  // namespace gnphys::testing

#endif  // GNPHYS_TESTS_TEST_UTIL_H_
