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

#ifndef NRS_NN_POSITIONAL_HPP_
#define NRS_NN_POSITIONAL_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrs/nn/tensor.hpp"

namespace nrs::nn {

enum class LabelMode {
  // L distinct sorted draws from [0, N-1].
  random,
  // floor(i * N / L); deterministic, for debugging.
  evenly_spaced,
};

// Standard sinusoidal table: even columns sin, odd columns cos.
template <typename S>
Matrix<S> sinusoidal_table(int rows, int dim) {
  Matrix<S> table(rows, dim);
  for (int pos = 0; pos < rows; ++pos) {
    for (int c = 0; c < dim; ++c) {
      const double rate = std::pow(10000.0, -static_cast<double>(c - c % 2) / dim);
      const double angle = pos * rate;
      table(pos, c) = static_cast<S>(c % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
  }
  return table;
}

// L distinct integers from [0, n - 1], ascending (Floyd's sampling).
inline std::vector<int> sample_sorted_labels(int length, int n, Rng& rng) {
  if (length > n) {
    throw std::length_error("input of " + std::to_string(length) +
                            " tokens exceeds positional table size " + std::to_string(n));
  }
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  for (int j = n - length; j < n; ++j) {
    const auto t = static_cast<int>(rng.uniform_int(0, j));
    taken[static_cast<std::size_t>(taken[static_cast<std::size_t>(t)] ? j : t)] = 1;
  }
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < n; ++i) {
    if (taken[static_cast<std::size_t>(i)]) labels.push_back(i);
  }
  return labels;
}

inline std::vector<int> evenly_spaced_labels(int length, int n) {
  if (length > n) throw std::length_error("input exceeds positional table size");
  std::vector<int> labels(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    labels[static_cast<std::size_t>(i)] =
        static_cast<int>(static_cast<long long>(i) * n / std::max(length, 1));
  }
  return labels;
}

// Positions are looked up by label in a fixed sinusoidal table. The table is
// registered as a non-trainable parameter so that checkpoints carry it; no
// gradient is ever written to it.
template <typename S>
class LabelPositionalEncoder {
 public:
  LabelPositionalEncoder() = default;
  LabelPositionalEncoder(ParameterStore<S>& store, const std::string& name, int max_length, int dim)
      : max_length_(max_length) {
    table_ = store.add(name + ".table", max_length, dim, /*trainable=*/false);
    table_->value = sinusoidal_table<S>(max_length, dim);
  }

  int max_length() const { return max_length_; }
  Parameter<S>* table() const { return table_; }

  std::vector<int> labels(int length, LabelMode mode, Rng& rng) const {
    return mode == LabelMode::random ? sample_sorted_labels(length, max_length_, rng)
                                     : evenly_spaced_labels(length, max_length_);
  }

  Matrix<S> rows(const std::vector<int>& labels) const {
    Matrix<S> out(static_cast<Eigen::Index>(labels.size()), table_->value.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0 || labels[i] >= max_length_) throw std::out_of_range("position label");
      out.row(static_cast<Eigen::Index>(i)) = table_->value.row(labels[i]);
    }
    return out;
  }

 private:
  int max_length_ = 0;
  Parameter<S>* table_ = nullptr;
};

}  // namespace nrs::nn

#endif  // NRS_NN_POSITIONAL_HPP_
