// Copyright 2026 The NRS Authors
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

#include "nrs/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace nrs::nn {
namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated weight file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void save_weights(const ParameterStore<float>& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write("NRSW", 4);
  put_u32(out, kWeightsVersion);
  put_u32(out, static_cast<std::uint32_t>(store.all().size()));
  for (const auto& p : store.all()) {
    put_u32(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put_u32(out, static_cast<std::uint32_t>(p.value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p.value.cols()));
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, p.value.data() + i, 4);
      put_u32(out, bits);
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void load_weights(ParameterStore<float>& store, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "NRSW", 4) != 0) {
    throw std::runtime_error(path.string() + " is not a weight file");
  }
  if (get_u32(in) != kWeightsVersion) throw std::runtime_error("unsupported weight file version");
  if (get_u32(in) != store.all().size()) throw std::runtime_error("parameter count mismatch");
  for (auto& p : store.all()) {
    std::string name(get_u32(in), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    const auto rows = get_u32(in);
    const auto cols = get_u32(in);
    if (name != p.name || rows != p.value.rows() || cols != p.value.cols()) {
      throw std::runtime_error("parameter mismatch at " + p.name);
    }
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      const std::uint32_t bits = get_u32(in);
      std::memcpy(p.value.data() + i, &bits, 4);
    }
  }
}

void write_model_config(Manifest& m, const ModelConfig& c) {
  m.set("model.vocab_size", c.vocab_size);
  m.set("model.embedding", c.embedding);
  m.set("model.encoder_layers", c.encoder_layers);
  m.set("model.decoder_layers", c.decoder_layers);
  m.set("model.heads", c.heads);
  m.set("model.feedforward", c.feedforward);
  m.set("model.dropout", c.dropout);
  m.set("model.window", c.window);
  m.set("model.max_length", c.max_length);
  m.set("model.attention_gain", c.attention_gain);
}

ModelConfig read_model_config(const Manifest& m) {
  ModelConfig c;
  c.vocab_size = static_cast<int>(m.get_int("model.vocab_size"));
  c.embedding = static_cast<int>(m.get_int("model.embedding"));
  c.encoder_layers = static_cast<int>(m.get_int("model.encoder_layers"));
  c.decoder_layers = static_cast<int>(m.get_int("model.decoder_layers"));
  c.heads = static_cast<int>(m.get_int("model.heads"));
  c.feedforward = static_cast<int>(m.get_int("model.feedforward"));
  c.dropout = m.get_double("model.dropout");
  c.window = static_cast<int>(m.get_int("model.window"));
  c.max_length = static_cast<int>(m.get_int("model.max_length"));
  c.attention_gain = m.get_double("model.attention_gain");
  return c;
}

}  // namespace nrs::nn
