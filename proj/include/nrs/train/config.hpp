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


#ifndef NRS_TRAIN_CONFIG_HPP_
#define NRS_TRAIN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nrs/nn/positional.hpp"
#include "nrs/nn/transformer.hpp"
#include "nrs/term/domain.hpp"
#include "nrs/term/vocabulary.hpp"
#include "nrs/util/manifest.hpp"

namespace nrs {

enum class ModuleKind { selector, solver };
enum class EngineKind { nrs, fastnrs };

std::string_view module_name(ModuleKind m);
ModuleKind parse_module(std::string_view name);
std::string_view engine_name(EngineKind e);
EngineKind parse_engine(std::string_view name);

inline constexpr int kTrainConfigVersion = 1;

struct TrainConfig {
  ModuleKind module = ModuleKind::selector;
  EngineKind engine = EngineKind::fastnrs;
  // nullopt: the multi-domain scenario.
  std::optional<Domain> domain = Domain::logic;
  // vocab_size is filled from the vocabulary when training starts.
  nn::ModelConfig model;
  double learning_rate = 1e-4;
  int batch_size = 512;
  int iterations = 5000;
  int warmup = 1000;
  // Global gradient-norm clip; 0 disables.
  double clip = 0.0;
  int checkpoint_every = 500;
  // Validation records per split used for checkpoint metrics; 0 uses all.
  int val_limit = 0;
  nn::LabelMode labels = nn::LabelMode::random;
  std::uint64_t seed = 0;

  // Shipped values of the reference hyperparameter tables.
  static TrainConfig defaults(ModuleKind module, EngineKind engine, std::optional<Domain> domain);

  std::string scope() const { return domain ? std::string(domain_name(*domain)) : "multi"; }
  Vocabulary vocabulary() const;

  Manifest to_manifest() const;
  // Keys absent from the manifest keep the defaults for its module, engine
  // and domain.
  static TrainConfig from_manifest(const Manifest& m);
  static TrainConfig read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

}  // namespace nrs

#endif  // NRS_TRAIN_CONFIG_HPP_
