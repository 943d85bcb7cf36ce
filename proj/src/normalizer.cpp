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

#include "gnphys/normalizer.hpp"

#include <cmath>
#include <stdexcept>

namespace gnphys {

Normalizer::Normalizer(int width)
    : sum_(static_cast<std::size_t>(width), 0.0),
      sumsq_(static_cast<std::size_t>(width), 0.0) {}

void Normalizer::check_width(const Tensor& rows) const {
  if (rows.rank() != 2 || rows.cols() != width()) {
    throw std::invalid_argument("normalizer: expected [N x " +
                                std::to_string(width()) + "], got " +
                                rows.shape_str());
  }
}

void Normalizer::accumulate(const Tensor& rows) {
  check_width(rows);
  for (int r = 0; r < rows.rows(); ++r) {
    for (int c = 0; c < width(); ++c) {
      const double v = rows.at(r, c);
      sum_[c] += v;
      sumsq_[c] += v * v;
    }
  }
  count_ += rows.rows();
}

double Normalizer::mean(int col) const {
  if (count_ < 2) return 0.0;
  return sum_[col] / static_cast<double>(count_);
}

double Normalizer::std_dev(int col) const {
  if (count_ < 2) return 1.0;
  const double m = sum_[col] / static_cast<double>(count_);
  const double var = sumsq_[col] / static_cast<double>(count_) - m * m;
  return std::sqrt(var > 0.0 ? var : 0.0);
}

double Normalizer::scale(int col) const {
  if (count_ < 2) return 1.0;
  return std::max(std_dev(col), kEps);
}

Tensor Normalizer::mean_row() const {
  Tensor t({1, width()});
  for (int c = 0; c < width(); ++c) t[c] = mean(c);
  return t;
}

Tensor Normalizer::scale_row() const {
  Tensor t({1, width()});
  for (int c = 0; c < width(); ++c) t[c] = scale(c);
  return t;
}

Tensor Normalizer::normalize(const Tensor& rows) const {
  check_width(rows);
  Tensor out(rows.shape());
  for (int r = 0; r < rows.rows(); ++r)
    for (int c = 0; c < width(); ++c)
      out.at(r, c) = (rows.at(r, c) - mean(c)) / scale(c);
  return out;
}

Tensor Normalizer::denormalize(const Tensor& rows) const {
  check_width(rows);
  Tensor out(rows.shape());
  for (int r = 0; r < rows.rows(); ++r)
    for (int c = 0; c < width(); ++c)
      out.at(r, c) = rows.at(r, c) * scale(c) + mean(c);
  return out;
}

Var Normalizer::normalize_var(Tape& t, Var rows) const {
  Tensor inv({1, width()});
  Tensor negmean({1, width()});
  for (int c = 0; c < width(); ++c) {
    inv[c] = 1.0 / scale(c);
    negmean[c] = -mean(c);
  }
  Var centered = t.add_rowvec(rows, t.constant(std::move(negmean)));
  return t.mul_rowvec(centered, t.constant(std::move(inv)));
}

Var Normalizer::denormalize_var(Tape& t, Var rows) const {
  Tensor sc({1, width()});
  Tensor m({1, width()});
  for (int c = 0; c < width(); ++c) {
    sc[c] = scale(c);
    m[c] = mean(c);
  }
  return t.add_rowvec(t.mul_rowvec(rows, t.constant(std::move(sc))),
                      t.constant(std::move(m)));
}

void Normalizer::save_to(Archive& a, const std::string& prefix) const {
  a.tensors[prefix + "/count"] = Tensor::scalar(static_cast<double>(count_));
  a.tensors[prefix + "/sum"] = Tensor::row(sum_);
  a.tensors[prefix + "/sumsq"] = Tensor::row(sumsq_);
}

void Normalizer::load_from(const Archive& a, const std::string& prefix) {
  count_ = static_cast<long long>(a.require(prefix + "/count")[0]);
  sum_ = a.require(prefix + "/sum").vec_data();
  sumsq_ = a.require(prefix + "/sumsq").vec_data();
}

bool Normalizer::operator==(const Normalizer& o) const {
  return count_ == o.count_ && sum_ == o.sum_ && sumsq_ == o.sumsq_;
}

}  // namespace gnphys
