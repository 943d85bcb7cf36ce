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

#ifndef GNPHYS_NORMALIZER_H_
#define GNPHYS_NORMALIZER_H_

#include "gnphys/archive.hpp"
#include "gnphys/tape.hpp"
#include "gnphys/tensor.hpp"

namespace gnphys {

// Online feature normalizer: per-column count/sum/sum-of-squares moments,
// shared by every row (node/edge) it is applied to. Population variance;
// scale floored at eps for degenerate columns. With fewer than two
// accumulated rows the transform is the identity.
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(int width);

  int width() const { return static_cast<int>(sum_.size()); }
  long long count() const { return count_; }

  // Running-moment update from [N x width] rows. Order-insensitive up to
  // floating error.
  void accumulate(const Tensor& rows);

  double mean(int col) const;
  double std_dev(int col) const;  // population
  // max(std, eps), or 1 when count < 2.
  double scale(int col) const;

  Tensor normalize(const Tensor& rows) const;
  Tensor denormalize(const Tensor& rows) const;

  // Tape versions for gradient flow; statistics enter as constants.
  Var normalize_var(Tape& t, Var rows) const;
  Var denormalize_var(Tape& t, Var rows) const;

  void save_to(Archive& a, const std::string& prefix) const;
  void load_from(const Archive& a, const std::string& prefix);

  bool operator==(const Normalizer& o) const;

  static constexpr double kEps = 1e-8;

 private:
  void check_width(const Tensor& rows) const;
  Tensor mean_row() const;
  Tensor scale_row() const;

  long long count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sumsq_;
};

}  // namespace gnphys

#endif  // GNPHYS_NORMALIZER_H_
