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

#include "gnphys/archive.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace gnphys {

static_assert(std::endian::native == std::endian::little,
              "archive format requires a little-endian host");

namespace {
constexpr char kMagic[8] = {'G', 'N', 'P', 'H', 'Y', 'S', 'A', '1'};
}

void Archive::save(const std::string& path) const {
  nlohmann::json header;
  header["version"] = kVersion;
  header["meta"] = meta;
  nlohmann::json index = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : tensors) {
    nlohmann::json e;
    e["name"] = name;
    e["shape"] = t.shape();
    e["offset"] = offset;
    index.push_back(e);
    offset += t.numel();
  }
  header["tensors"] = index;
  const std::string hs = header.dump();

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("archive: cannot open for write: " + path);
  f.write(kMagic, 8);
  const std::uint64_t hlen = hs.size();
  f.write(reinterpret_cast<const char*>(&hlen), 8);
  f.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& [name, t] : tensors) {
    (void)name;
    f.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.numel() * sizeof(double)));
  }
  if (!f) throw std::runtime_error("archive: write failed: " + path);
}

Archive Archive::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("archive: cannot open: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::string(magic, 8) != std::string(kMagic, 8)) {
    throw std::runtime_error("archive: bad magic in " + path);
  }
  std::uint64_t hlen = 0;
  f.read(reinterpret_cast<char*>(&hlen), 8);
  std::string hs(hlen, '\0');
  f.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!f) throw std::runtime_error("archive: truncated header in " + path);

  nlohmann::json header = nlohmann::json::parse(hs);
  if (header.at("version").get<int>() != kVersion) {
    throw std::runtime_error("archive: unsupported version in " + path);
  }
  Archive a;
  a.meta = header.value("meta", nlohmann::json::object());
  for (const auto& e : header.at("tensors")) {
    const std::string name = e.at("name").get<std::string>();
    const std::vector<int> shape = e.at("shape").get<std::vector<int>>();
    Tensor t(shape);
    f.read(reinterpret_cast<char*>(t.data()),
           static_cast<std::streamsize>(t.numel() * sizeof(double)));
    if (!f) throw std::runtime_error("archive: truncated payload in " + path);
    a.tensors.emplace(name, std::move(t));
  }
  return a;
}

const Tensor& Archive::require(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) {
    throw std::runtime_error("archive: missing tensor " + name);
  }
  return it->second;
}

}  // namespace gnphys
