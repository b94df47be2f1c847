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


#ifndef NRS_PIPELINE_NEURAL_HPP_
#define NRS_PIPELINE_NEURAL_HPP_

#include "nrs/nn/positional.hpp"
#include "nrs/nn/transformer.hpp"
#include "nrs/pipeline/types.hpp"
#include "nrs/term/vocabulary.hpp"

namespace nrs {

// Pipeline adapters over trained models. The models are borrowed and must
// outlive the adapter. Outputs are decoded in the domain of each input.

class NeuralLeafSampler : public LeafSampler {
 public:
  NeuralLeafSampler(nn::Seq2SeqModel<float>& model, Vocabulary vocab, nn::LabelMode labels = nn::LabelMode::random)
      : model_(model), vocab_(std::move(vocab)), labels_(labels) {}

  // Position labels and token draws for input i come from seeds[i].
  std::vector<SelectorSample> sample(const std::vector<Formula>& inputs,
                                     const std::vector<std::uint64_t>& seeds) override;

 private:
  nn::Seq2SeqModel<float>& model_;
  Vocabulary vocab_;
  nn::LabelMode labels_;
};

class NeuralSegmenter : public Segmenter {
 public:
  NeuralSegmenter(nn::SegmenterModel<float>& model, Vocabulary vocab,
                  nn::LabelMode labels = nn::LabelMode::random)
      : model_(model), vocab_(std::move(vocab)), labels_(labels) {}

  std::vector<std::vector<int>> segment(const std::vector<Formula>& inputs,
                                        const std::vector<std::uint64_t>& seeds) override;

 private:
  nn::SegmenterModel<float>& model_;
  Vocabulary vocab_;
  nn::LabelMode labels_;
};

// Greedy character-level decoding. Labels are drawn from a hash of the leaf
// so equal leaves get equal answers.
class NeuralSolver : public Solver {
 public:
  static constexpr int kMaxOutput = 24;

  NeuralSolver(nn::Seq2SeqModel<float>& model, Vocabulary vocab, nn::LabelMode labels = nn::LabelMode::random)
      : model_(model), vocab_(std::move(vocab)), labels_(labels) {}

  std::vector<SolverOutput> solve(const std::vector<Formula>& leaves) override;

 private:
  nn::Seq2SeqModel<float>& model_;
  Vocabulary vocab_;
  nn::LabelMode labels_;
};

}  // namespace nrs

#endif  // NRS_PIPELINE_NEURAL_HPP_
