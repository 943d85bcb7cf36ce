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

#ifndef GNPHYS_TENSOR_H_
#define GNPHYS_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnphys {

// Dense double-precision tensor, row-major, rank 0..2. Rank-2 everywhere in
// the model pipelines (rows = entities, cols = features); rank 0/1 appear in
// scalar losses and small test vectors. Zero-sized dimensions are legal.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int> shape)
      : shape_(std::move(shape)), data_(checked_numel(shape_), 0.0) {}

  Tensor(std::vector<int> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != checked_numel(shape_)) {
      throw std::invalid_argument("Tensor: data length " +
                                  std::to_string(data_.size()) +
                                  " does not match shape " + shape_str());
    }
  }

  static Tensor scalar(double v) { return Tensor({}, {v}); }

  static Tensor row(std::vector<double> v) {
    const int n = static_cast<int>(v.size());
    return Tensor({1, n}, std::move(v));
  }

  static Tensor vec(std::vector<double> v) {
    const int n = static_cast<int>(v.size());
    return Tensor({n}, std::move(v));
  }

  static Tensor zeros(int r, int c) { return Tensor({r, c}); }

  static Tensor identity(int n) {
    Tensor t({n, n});
    for (int i = 0; i < n; ++i) t.data_[static_cast<std::size_t>(i) * n + i] = 1.0;
    return t;
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t numel() const { return data_.size(); }

  // Matrix view: rank-0 is 1x1, rank-1 is 1xN, rank-2 is RxC.
  int rows() const {
    if (shape_.size() < 2) return 1;
    return shape_[0];
  }
  int cols() const {
    if (shape_.empty()) return 1;
    return shape_.back();
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec_data() { return data_; }
  const std::vector<double>& vec_data() const { return data_; }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  std::string shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(shape_[i]);
    }
    return s + "]";
  }

 private:
  static std::size_t checked_numel(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) {
      if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }

  std::vector<int> shape_;
  std::vector<double> data_;
};

}  // namespace gnphys

#endif  // GNPHYS_TENSOR_H_
