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


#include "nrs/pipeline/neural.hpp"

#include <cmath>

#include "nrs/nn/sampling.hpp"
#include "nrs/util/random.hpp"

namespace nrs {
namespace {

// Inputs the encoder cannot take (empty, or longer than the label range)
// are answered without running the model.
bool fits(const std::vector<int>& ids, int max_length) {
  return !ids.empty() && static_cast<int>(ids.size()) <= max_length;
}

std::vector<int> strip_eos(std::vector<int> ids) {
  if (!ids.empty() && ids.back() == Vocabulary::kEos) ids.pop_back();
  return ids;
}

}  // namespace

std::vector<SelectorSample> NeuralLeafSampler::sample(const std::vector<Formula>& inputs,
                                                      const std::vector<std::uint64_t>& seeds) {
  const int n = model_.config().max_length;
  std::vector<SelectorSample> out;
  for (const auto& f : inputs) out.push_back(SelectorSample{Formula(f.domain(), {}), 0.0});
  std::vector<std::vector<int>> src;
  std::vector<std::vector<int>> labels;
  std::vector<Rng> rngs;
  std::vector<std::size_t> index;
  int longest = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto ids = vocab_.encode_lenient(inputs[i]);
    if (!fits(ids, n)) continue;
    Rng rng(seeds[i]);
    labels.push_back(model_.encoder().labels(static_cast<int>(ids.size()), labels_, rng));
    rngs.emplace_back(rng.next());
    longest = std::max(longest, static_cast<int>(ids.size()));
    src.push_back(std::move(ids));
    index.push_back(i);
  }
  if (src.empty()) return out;
  auto generated = model_.generate(src, labels, std::min(longest + 2, n), nn::DecodeMode::sample, rngs);
  for (std::size_t j = 0; j < generated.size(); ++j) {
    const auto& g = generated[j];
    out[index[j]] = SelectorSample{vocab_.decode(strip_eos(g.tokens), inputs[index[j]].domain()),
                                   nn::sequence_confidence(g.probs, nn::ConfidenceMode::product)};
  }
  return out;
}

std::vector<std::vector<int>> NeuralSegmenter::segment(const std::vector<Formula>& inputs,
                                                       const std::vector<std::uint64_t>& seeds) {
  const int n = model_.config().max_length;
  std::vector<std::vector<int>> out(inputs.size());
  std::vector<std::vector<int>> src;
  std::vector<std::vector<int>> labels;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out[i].assign(inputs[i].size(), 0);
    auto ids = vocab_.encode_lenient(inputs[i]);
    if (!fits(ids, n) || ids.size() != inputs[i].size()) continue;
    Rng rng(seeds[i]);
    labels.push_back(model_.encoder().labels(static_cast<int>(ids.size()), labels_, rng));
    src.push_back(std::move(ids));
    index.push_back(i);
  }
  if (src.empty()) return out;
  auto probs = model_.predict(src, labels);
  for (std::size_t j = 0; j < probs.size(); ++j) out[index[j]] = nn::threshold_mask(probs[j]);
  return out;
}

std::vector<SolverOutput> NeuralSolver::solve(const std::vector<Formula>& leaves) {
  const int n = model_.config().max_length;
  std::vector<SolverOutput> out;
  for (const auto& l : leaves) out.push_back(SolverOutput{Formula(l.domain(), {"?"}), kNoConfidence});
  std::vector<std::vector<int>> src;
  std::vector<std::vector<int>> labels;
  std::vector<Rng> rngs;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto ids = vocab_.encode_lenient(leaves[i]);
    if (!fits(ids, n)) continue;
    Rng rng(fnv1a(leaves[i].render()));
    labels.push_back(model_.encoder().labels(static_cast<int>(ids.size()), labels_, rng));
    rngs.emplace_back(0);
    src.push_back(std::move(ids));
    index.push_back(i);
  }
  if (src.empty()) return out;
  auto generated = model_.generate(src, labels, kMaxOutput, nn::DecodeMode::greedy, rngs);
  for (std::size_t j = 0; j < generated.size(); ++j) {
    const auto& g = generated[j];
    const std::string text = vocab_.decode_text(strip_eos(g.tokens));
    double log_conf = 0.0;
    for (double p : g.probs) log_conf += std::log(std::max(p, 1e-300));
    const Domain d = leaves[index[j]].domain();
    out[index[j]] = SolverOutput{text.empty() ? Formula(d, {"?"}) : tokenize_lenient(text, d), log_conf};
  }
  return out;
}

}  // namespace nrs
