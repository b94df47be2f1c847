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

#ifndef NRS_NN_TENSOR_HPP_
#define NRS_NN_TENSOR_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "nrs/util/random.hpp"

namespace nrs::nn {

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;

template <typename S>
struct Parameter {
  std::string name;
  Matrix<S> value;
  Matrix<S> grad;
  bool trainable = true;
};

// Owns every parameter of a model. Addresses are stable (deque), so layers
// keep plain pointers into the store.
template <typename S>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;
  ParameterStore(ParameterStore&&) noexcept = default;
  ParameterStore& operator=(ParameterStore&&) noexcept = default;

  Parameter<S>* add(std::string name, int rows, int cols, bool trainable = true) {
    params_.push_back(Parameter<S>{std::move(name), Matrix<S>::Zero(rows, cols),
                                   Matrix<S>::Zero(rows, cols), trainable});
    return &params_.back();
  }

  void zero_grad() {
    for (auto& p : params_) p.grad.setZero();
  }

  std::deque<Parameter<S>>& all() { return params_; }
  const std::deque<Parameter<S>>& all() const { return params_; }

  Parameter<S>* find(const std::string& name) {
    for (auto& p : params_) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }

  std::size_t trainable_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) {
      if (p.trainable) n += static_cast<std::size_t>(p.value.size());
    }
    return n;
  }

 private:
  std::deque<Parameter<S>> params_;
};

template <typename S>
void init_uniform(Matrix<S>& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<S>((2.0 * rng.uniform() - 1.0) * bound);
  }
}

template <typename S>
void init_normal(Matrix<S>& m, double stddev, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<S>(rng.normal() * stddev);
}

// Lengths of the sequences packed row-wise into one matrix.
struct Layout {
  std::vector<int> offsets{0};

  static Layout from_lengths(const std::vector<int>& lengths) {
    Layout l;
    for (int n : lengths) l.offsets.push_back(l.offsets.back() + n);
    return l;
  }
  int batch() const { return static_cast<int>(offsets.size()) - 1; }
  int start(int i) const { return offsets[static_cast<std::size_t>(i)]; }
  int length(int i) const {
    return offsets[static_cast<std::size_t>(i) + 1] - offsets[static_cast<std::size_t>(i)];
  }
  int total() const { return offsets.back(); }
};

}  // namespace nrs::nn

#endif  // NRS_NN_TENSOR_HPP_
