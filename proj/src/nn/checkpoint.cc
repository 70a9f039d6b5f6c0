// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#include "fedcav/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fedcav/base/error.h"
#include "fedcav/base/hash.h"

namespace fedcav::nn {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'F', 'C', 'A', 'V', 'C', 'K', 'P', 'T'};
constexpr std::uint8_t kMeta = 1, kMlp = 2, kAdam = 3;

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    out_.append(raw, sizeof(T));
  }
  void PutString(std::string_view s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void PutDoubles(std::span<const double> values) {
    out_.append(reinterpret_cast<const char*>(values.data()),
                values.size() * sizeof(double));
  }
  void Append(std::string_view raw) { out_.append(raw); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string GetString() {
    const auto n = Get<std::uint32_t>();
    Need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::vector<double> GetDoubles(std::uint64_t count) {
    if (count > (data_.size() - pos_) / sizeof(double)) {
      throw CheckpointError("checkpoint truncated or corrupt (array length)");
    }
    std::vector<double> v(count);
    std::memcpy(v.data(), data_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
    return v;
  }
  std::string_view Take(std::uint64_t n) {
    Need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(std::uint64_t n) const {
    if (n > data_.size() - pos_) {
      throw CheckpointError("checkpoint truncated or corrupt");
    }
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string EncodeMlp(const MlpParams& p) {
  Writer w;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(p.num_layers()));
  for (std::size_t s : p.layer_sizes()) {
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(s));
  }
  for (Activation a : p.activations()) w.Put<std::uint8_t>(static_cast<std::uint8_t>(a));
  w.Put<std::uint64_t>(p.num_params());
  w.PutDoubles(p.params());
  return std::move(w.str());
}

MlpParams DecodeMlp(std::string_view payload) {
  Reader r(payload);
  const auto layers = r.Get<std::uint32_t>();
  if (layers == 0 || layers > 1024) throw CheckpointError("bad layer count");
  std::vector<std::size_t> sizes;
  for (std::uint32_t i = 0; i <= layers; ++i) sizes.push_back(r.Get<std::uint32_t>());
  std::vector<Activation> acts;
  for (std::uint32_t i = 0; i < layers; ++i) {
    const auto a = r.Get<std::uint8_t>();
    if (a > 2) throw CheckpointError("unknown activation tag " + std::to_string(a));
    acts.push_back(static_cast<Activation>(a));
  }
  const auto count = r.Get<std::uint64_t>();
  if (count != ParamCount(sizes)) {
    throw CheckpointError("parameter count does not match layer sizes");
  }
  std::vector<double> values = r.GetDoubles(count);
  if (!r.done()) throw CheckpointError("trailing bytes in network section");
  MlpParams p;
  try {
    p = MlpParams(std::move(sizes), std::move(acts));
  } catch (const ShapeError& e) {
    throw CheckpointError(std::string("bad network section: ") + e.what());
  }
  p.Unflatten(values);
  return p;
}

std::string EncodeAdam(const AdamState& s) {
  Writer w;
  w.Put<std::uint64_t>(s.t);
  w.Put<double>(s.beta1);
  w.Put<double>(s.beta2);
  w.Put<double>(s.eps);
  w.Put<std::uint64_t>(s.m.size());
  w.PutDoubles(s.m);
  w.PutDoubles(s.v);
  return std::move(w.str());
}

AdamState DecodeAdam(std::string_view payload) {
  Reader r(payload);
  AdamState s;
  s.t = r.Get<std::uint64_t>();
  s.beta1 = r.Get<double>();
  s.beta2 = r.Get<double>();
  s.eps = r.Get<double>();
  const auto n = r.Get<std::uint64_t>();
  s.m = r.GetDoubles(n);
  s.v = r.GetDoubles(n);
  if (!r.done()) throw CheckpointError("trailing bytes in optimizer section");
  return s;
}

std::string EncodeMeta(const std::map<std::string, std::string>& meta) {
  Writer w;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(meta.size()));
  for (const auto& [k, v] : meta) {
    w.PutString(k);
    w.PutString(v);
  }
  return std::move(w.str());
}

void AddSection(Writer& w, std::uint8_t kind, std::string_view name,
                std::string_view payload) {
  w.Put<std::uint8_t>(kind);
  w.PutString(name);
  w.Put<std::uint64_t>(payload.size());
  w.Append(payload);
}

}  // namespace

std::string Checkpoint::Serialize() const {
  Writer w;
  w.Append(std::string_view(kMagic, sizeof(kMagic)));
  w.Put<std::uint32_t>(kVersion);
  w.Put<std::uint32_t>(
      static_cast<std::uint32_t>(1 + networks.size() + optimizers.size()));
  AddSection(w, kMeta, "meta", EncodeMeta(meta));
  for (const auto& [name, net] : networks) AddSection(w, kMlp, name, EncodeMlp(net));
  for (const auto& [name, opt] : optimizers) AddSection(w, kAdam, name, EncodeAdam(opt));
  w.Put<std::uint64_t>(Fnv1a64(w.str()));
  return std::move(w.str());
}

Checkpoint Checkpoint::Deserialize(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) + 16 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file (bad magic or too short)");
  }
  Reader header(bytes.substr(sizeof(kMagic)));
  const auto version = header.Get<std::uint32_t>();
  if (version != kVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 8);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + bytes.size() - 8, 8);
  if (Fnv1a64(body) != stored) {
    throw CheckpointError("checkpoint checksum mismatch (truncated or corrupt)");
  }

  Reader r(body.substr(sizeof(kMagic) + 4));
  const auto sections = r.Get<std::uint32_t>();
  Checkpoint ckpt;
  for (std::uint32_t i = 0; i < sections; ++i) {
    const auto kind = r.Get<std::uint8_t>();
    std::string name = r.GetString();
    const auto len = r.Get<std::uint64_t>();
    const std::string_view payload = r.Take(len);
    switch (kind) {
      case kMeta: {
        Reader m(payload);
        const auto n = m.Get<std::uint32_t>();
        for (std::uint32_t j = 0; j < n; ++j) {
          std::string key = m.GetString();
          ckpt.meta[key] = m.GetString();
        }
        break;
      }
      case kMlp:
        ckpt.networks.emplace(std::move(name), DecodeMlp(payload));
        break;
      case kAdam:
        ckpt.optimizers.emplace(std::move(name), DecodeAdam(payload));
        break;
      default:
        throw CheckpointError("unknown section kind " + std::to_string(kind));
    }
  }
  if (!r.done()) throw CheckpointError("trailing bytes after last section");
  return ckpt;
}

void Checkpoint::Save(const std::filesystem::path& path) const {
  const std::string bytes = Serialize();
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write '" + tmp.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Deserialize(buffer.str());
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

const MlpParams& Checkpoint::network(const std::string& name) const {
  auto it = networks.find(name);
  if (it == networks.end()) throw CheckpointError("checkpoint has no network '" + name + "'");
  return it->second;
}

const AdamState& Checkpoint::optimizer(const std::string& name) const {
  auto it = optimizers.find(name);
  if (it == optimizers.end()) {
    throw CheckpointError("checkpoint has no optimizer state '" + name + "'");
  }
  return it->second;
}

const std::string& Checkpoint::meta_value(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) throw CheckpointError("checkpoint has no meta key '" + key + "'");
  return it->second;
}

std::string Checkpoint::meta_or(const std::string& key,
                                std::string_view fallback) const {
  auto it = meta.find(key);
  return it == meta.end() ? std::string(fallback) : it->second;
}

}  // namespace fedcav::nn
