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

#ifndef NRS_NN_OPTIM_HPP_
#define NRS_NN_OPTIM_HPP_

#include <cmath>
#include <vector>

#include "nrs/nn/tensor.hpp"

namespace nrs::nn {

// Linear warm-up from 0 to the peak, then cosine annealing to 0 at `total`.
struct WarmupCosine {
  double peak = 1e-4;
  int warmup = 1000;
  int total = 5000;

  double operator()(int iteration) const {
    if (iteration < warmup) return peak * iteration / warmup;
    if (iteration >= total) return 0.0;
    const double progress = static_cast<double>(iteration - warmup) / (total - warmup);
    return peak * 0.5 * (1.0 + std::cos(3.14159265358979323846 * progress));
  }
};

template <typename S>
class Adam {
 public:
  explicit Adam(ParameterStore<S>& store, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : store_(&store), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (auto& p : store.all()) {
      m_.push_back(Matrix<S>::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Matrix<S>::Zero(p.value.rows(), p.value.cols()));
    }
  }

  // Global L2 norm of trainable gradients.
  double grad_norm() const {
    double sq = 0.0;
    for (const auto& p : store_->all()) {
      if (p.trainable) sq += static_cast<double>(p.grad.squaredNorm());
    }
    return std::sqrt(sq);
  }

  // One update. Gradients are rescaled first when clip > 0 and the global
  // norm exceeds it.
  void step(double lr, double clip = 0.0) {
    ++t_;
    double scale = 1.0;
    if (clip > 0.0) {
      const double norm = grad_norm();
      if (norm > clip) scale = clip / norm;
    }
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    std::size_t i = 0;
    for (auto& p : store_->all()) {
      if (p.trainable) {
        auto g = (p.grad.array() * static_cast<S>(scale));
        m_[i].array() = static_cast<S>(beta1_) * m_[i].array() + static_cast<S>(1 - beta1_) * g;
        v_[i].array() = static_cast<S>(beta2_) * v_[i].array() + static_cast<S>(1 - beta2_) * g.square();
        p.value.array() -= static_cast<S>(lr) * (m_[i].array() / static_cast<S>(c1)) /
                           ((v_[i].array() / static_cast<S>(c2)).sqrt() + static_cast<S>(eps_));
      }
      ++i;
    }
  }

  long long steps() const { return t_; }

 private:
  ParameterStore<S>* store_;
  double beta1_, beta2_, eps_;
  long long t_ = 0;
  std::vector<Matrix<S>> m_, v_;
};

}  // namespace nrs::nn

#endif  // NRS_NN_OPTIM_HPP_
