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

#ifndef NRS_NN_SAMPLING_HPP_
#define NRS_NN_SAMPLING_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nrs/util/random.hpp"

namespace nrs::nn {

enum class DecodeMode { sample, greedy };
enum class ConfidenceMode { product, log_sum };

struct SampledOutput {
  // Emitted ids, including the terminating <eos> when one was emitted.
  std::vector<int> tokens;
  // Softmax probability of each emitted id at its step.
  std::vector<double> probs;
  bool truncated = false;
};

// Product of the probabilities, or the sum of their logs.
inline double sequence_confidence(std::span<const double> probs, ConfidenceMode mode) {
  if (mode == ConfidenceMode::product) {
    double c = 1.0;
    for (double p : probs) c *= p;
    return c;
  }
  double c = 0.0;
  for (double p : probs) c += std::log(p);
  return c;
}

// Softmax of a logit row, in double.
template <typename Row>
std::vector<double> softmax(const Row& logits) {
  std::vector<double> p(static_cast<std::size_t>(logits.size()));
  double top = -INFINITY;
  for (Eigen::Index i = 0; i < logits.size(); ++i) top = std::max(top, static_cast<double>(logits(i)));
  double z = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    p[static_cast<std::size_t>(i)] = std::exp(static_cast<double>(logits(i)) - top);
    z += p[static_cast<std::size_t>(i)];
  }
  for (double& v : p) v /= z;
  return p;
}

// Index drawn from a categorical distribution by inverse CDF.
inline int sample_categorical(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the total; take the last nonzero entry.
  for (std::size_t i = probs.size(); i > 0; --i) {
    if (probs[i - 1] > 0.0) return static_cast<int>(i - 1);
  }
  return 0;
}

inline int argmax(const std::vector<double>& probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace nrs::nn

#endif  // NRS_NN_SAMPLING_HPP_
