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

#ifndef GNPHYS_ARCHIVE_H_
#define GNPHYS_ARCHIVE_H_

#include <map>
#include <string>

#include <json.hpp>

#include "gnphys/tensor.hpp"

namespace gnphys {

// Versioned container mapping parameter paths to tensors, used for
// checkpoints and any other named-tensor state.
//
// File layout:
//   bytes 0..7   magic "GNPHYSA1"
//   bytes 8..15  little-endian u64: JSON header length in bytes
//   header       UTF-8 JSON: {"version":1, "meta":{...},
//                 "tensors":[{"name","shape","offset"}...]} with offsets in
//                 doubles into the payload, in name order
//   payload      concatenated little-endian float64 data
//
// Round-trips are bit-exact.
struct Archive {
  static constexpr int kVersion = 1;

  nlohmann::json meta = nlohmann::json::object();
  std::map<std::string, Tensor> tensors;

  void save(const std::string& path) const;
  static Archive load(const std::string& path);

  const Tensor& require(const std::string& name) const;
};

}  // namespace gnphys

#endif  // GNPHYS_ARCHIVE_H_
