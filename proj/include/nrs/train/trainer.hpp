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


#ifndef NRS_TRAIN_TRAINER_HPP_
#define NRS_TRAIN_TRAINER_HPP_

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nrs/datagen/dataset.hpp"
#include "nrs/nn/transformer.hpp"
#include "nrs/train/config.hpp"

namespace nrs {

struct Checkpoint {
  std::filesystem::path dir;
  int iteration = 0;
  double id_metric = 0.0;
  double ood_metric = 0.0;
};

struct LogRow {
  int iteration = 0;
  // Mean training loss since the previous row.
  double loss = 0.0;
  double id_metric = 0.0;
  double ood_metric = 0.0;
};

struct TrainData {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> id_val;
  // Empty for the Solver, which has no OOD split; the ID metric stands in.
  std::vector<DatasetRecord> ood_val;
  // Further inputs training must not see (the test set). Ignored for the
  // Solver, whose closed rule space overlaps nesting-1 test formulas.
  std::vector<DatasetRecord> exclude;
};

struct TrainResult {
  std::vector<Checkpoint> checkpoints;
  std::vector<LogRow> log;
  // Loss became non-finite; checkpoints stop at the last good one.
  bool diverged = false;
  double seconds = 0.0;
};

using ProgressFn = std::function<void(const LogRow&)>;

// Trains the module named by the config. Writes <out>/iter_<N>/ per
// checkpoint (weights.bin, manifest.txt) and <out>/log.csv. Throws
// std::runtime_error when training inputs leak into validation or test.
TrainResult train_module(const TrainConfig& config, const TrainData& data, const std::filesystem::path& out,
                         const ProgressFn& progress = {});

// Highest OOD metric; earlier iteration on ties. Throws on an empty list.
const Checkpoint& select_model_on_ood(const std::vector<Checkpoint>& checkpoints);

std::string log_csv(const std::vector<LogRow>& rows);

// Encoded evaluation sets.
struct MaskSet {
  std::vector<std::vector<int>> inputs;
  std::vector<std::vector<int>> masks;
};

MaskSet encode_segmentation(const std::vector<DatasetRecord>& records, const Vocabulary& vocab);
std::vector<nn::SeqPair> encode_seq2seq(const std::vector<DatasetRecord>& records, const Vocabulary& vocab);

// Fraction of inputs whose thresholded mask equals the target exactly.
// Position labels for record i are drawn from derive(seed, i).
double exact_mask_accuracy(nn::SegmenterModel<float>& model, const MaskSet& set, nn::LabelMode labels,
                           std::uint64_t seed);
// Greedy decoding; fraction of exact target matches.
double exact_sequence_accuracy(nn::Seq2SeqModel<float>& model, const std::vector<nn::SeqPair>& set,
                               nn::LabelMode labels, std::uint64_t seed);

struct LoadedSegmenter {
  Manifest manifest;
  Vocabulary vocab;
  std::unique_ptr<nn::SegmenterModel<float>> model;
};

struct LoadedSeq2Seq {
  Manifest manifest;
  Vocabulary vocab;
  std::unique_ptr<nn::Seq2SeqModel<float>> model;
};

LoadedSegmenter load_segmenter(const std::filesystem::path& checkpoint_dir);
LoadedSeq2Seq load_seq2seq(const std::filesystem::path& checkpoint_dir);

// Throws std::invalid_argument when the checkpoint was trained on another
// vocabulary.
void check_vocabulary(const Manifest& checkpoint, const Vocabulary& vocab);

}  // namespace nrs

#endif  // NRS_TRAIN_TRAINER_HPP_
