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

#ifndef NRS_NN_CHECKPOINT_HPP_
#define NRS_NN_CHECKPOINT_HPP_

#include <filesystem>

#include "nrs/nn/tensor.hpp"
#include "nrs/nn/transformer.hpp"
#include "nrs/util/manifest.hpp"

namespace nrs::nn {

// Weight blob format version. Layout: "NRSW", u32 version, u32 count, then
// per parameter: u32 name length, name bytes, u32 rows, u32 cols, float32
// row-major values. Little-endian.
inline constexpr unsigned kWeightsVersion = 1;

void save_weights(const ParameterStore<float>& store, const std::filesystem::path& path);

// Names and shapes must match the store exactly.
void load_weights(ParameterStore<float>& store, const std::filesystem::path& path);

void write_model_config(Manifest& manifest, const ModelConfig& config);
ModelConfig read_model_config(const Manifest& manifest);

}  // namespace nrs::nn

#endif  // NRS_NN_CHECKPOINT_HPP_
